#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "polarpo/po.hpp"
#include "polarpo/rate_match.hpp"

namespace polarpo {

// Reliability scores for every synthetic-channel position of a length-N code.
struct ReliabilityOrder {
    std::size_t N = 0;
    // scores[i] belongs to position i+1; +infinity marks a position whose
    // channel is certain (shortening), higher is more reliable.
    std::vector<double> scores;
    // 1-based positions, most reliable first.
    std::vector<std::size_t> order;
    std::string provenance;
};

// Gaussian-approximation density evolution of mean LLRs over the polar
// butterfly with rate-matched initialization: punctured bits start at mean 0,
// shortened bits at the symbolic certain state, data bits at 4*10^(snr/10)
// (unit-energy BPSK, noise variance 1/(2*10^(snr/10))).
ReliabilityOrder ga_reliabilities(const RateMatchSpec& spec, std::size_t N,
                                  double design_snr_db);

// Polarization-weight sequence: score(index) = sum of beta^j over the set
// bits of the position index, beta = 2^(1/4).
ReliabilityOrder pw_sequence(std::size_t N);
double pw_beta();

// Top-K non-degenerate positions by score, returned sorted ascending.
std::vector<std::size_t> select_info_set(const ReliabilityOrder& order, std::size_t K,
                                         const RateMatchSpec& spec, std::size_t N);

// Starts from the top-K of base; whenever a holding pair's lesser position is
// in the set while its (more reliable) greater position is not, the two are
// exchanged, repeated to a fixpoint.  Deterministic: pairs are processed in
// lexicographic position order.  Returns sorted ascending positions.
std::vector<std::size_t> improve_with_pos(const ReliabilityOrder& base,
                                          const std::vector<PoPair>& pairs, std::size_t K,
                                          const RateMatchSpec& spec);

}  // namespace polarpo
