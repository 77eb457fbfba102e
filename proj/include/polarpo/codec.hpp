#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "polarpo/rate_match.hpp"

namespace polarpo {

// Bit vectors are indexed by synthetic-channel position (1-based position p
// lives at index p-1), i.e. in decoding order v = u * B_N.  The u-domain view
// is reachable through bit_reversal_permute.

std::vector<std::uint8_t> bit_reversal_permute(const std::vector<std::uint8_t>& u);

// v -> v * F^{(x)n} over GF(2); an involution.
std::vector<std::uint8_t> polar_transform(std::vector<std::uint8_t> v);

// Position-ordered frame -> codeword.  In position indexing the generator's
// bit-reversal is already absorbed, so this is x = v * F^{(x)n}; an involution.
std::vector<std::uint8_t> encode(const std::vector<std::uint8_t>& v);

struct CodeConfig {
    std::size_t N = 0;
    std::size_t K = 0;  // number of info positions, CRC bits included
    RateMatchSpec spec = RateMatchSpec::none();
    std::vector<std::size_t> info_set;        // 1-based positions, sorted, |.| == K
    unsigned crc_length = 12;                 // 0 disables the CRC
    std::uint32_t crc_polynomial = 0x80F;     // taps below the leading term
    std::vector<unsigned> list_sizes{1, 2, 4, 8};

    std::size_t transmitted_length() const;   // N minus rate-matched positions
    double code_rate() const;                 // (K - crc_length) / transmitted_length
    void validate() const;                    // throws on inconsistent setup
};

// CRC remainder of `bits` (MSB-first), `crc_length` wide.
std::uint32_t crc_remainder(const std::vector<std::uint8_t>& bits, unsigned crc_length,
                            std::uint32_t polynomial);
std::vector<std::uint8_t> crc_append(std::vector<std::uint8_t> payload, unsigned crc_length,
                                     std::uint32_t polynomial);
bool crc_ok(const std::vector<std::uint8_t>& bits, unsigned crc_length,
            std::uint32_t polynomial);

// LLR sentinel for positions known with certainty (shortening).
double certain_llr();

// BPSK over AWGN with noise deviation sigma; punctured positions are not
// transmitted (LLR 0), shortened positions are known (certain LLR) and their
// code bits must be 0.
std::vector<double> transmit(const std::vector<std::uint8_t>& x, const RateMatchSpec& spec,
                             double sigma, std::mt19937_64& rng);

// Successive-cancellation decoding; returns the estimated input bits in
// position order (frozen positions decoded as 0).
std::vector<std::uint8_t> sc_decode(const std::vector<double>& llr, const CodeConfig& config);

// List decoding; CRC-passing path preferred, best metric as fallback.
std::vector<std::uint8_t> scl_decode(const std::vector<double>& llr, const CodeConfig& config,
                                     unsigned L);

struct FerPoint {
    double snr_db = 0.0;  // Eb/N0
    unsigned L = 1;
    std::size_t trials = 0;
    std::size_t frame_errors = 0;
    double fer = 0.0;
    double ci_lo = 0.0;  // exact binomial (Clopper-Pearson) 95% bounds
    double ci_hi = 1.0;
};

struct FerOptions {
    std::size_t max_trials = 2000000;
    std::size_t target_errors = 100;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::size_t round_size = 256;  // stopping decisions at round boundaries only
};

// One FerPoint per (snr, L) combination, L from config.list_sizes.  Results
// depend on (config, grid, options.seed) but not on the thread count.
std::vector<FerPoint> fer_experiment(const CodeConfig& config,
                                     const std::vector<double>& ebn0_db_grid,
                                     const FerOptions& options);

}  // namespace polarpo
