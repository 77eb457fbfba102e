#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "polarpo/rate_match.hpp"

namespace polarpo {

// Averaging chain: start from (a repeated P times, b repeated N-P times) and
// replace scheduled (a,b) pairs one at a time by their geometric mean, pairing
// positions outermost stage first.
struct AveragingChain {
    std::size_t N = 0;
    std::size_t P = 0;
    double a = 0.0;
    double b = 0.0;
    // 1-based position pairs, sorted outermost stage first (descending
    // operand offset), ties by smaller first index.
    std::vector<std::pair<std::size_t, std::size_t>> schedule;
    // z[k] is the vector after k replacements; z.size() == schedule.size()+1.
    std::vector<std::vector<double>> z;
};

AveragingChain build_averaging_chain(std::size_t N, std::size_t P, double a, double b);

struct ChainReport {
    std::size_t steps = 0;
    double max_violation = 0.0;  // max over steps and components of h_next - h_prev
    bool boundary = false;       // a or b at an interval endpoint
};

// Executes the averaging chain and checks that every replacement step can
// only improve (componentwise lower) the polarized vector.
ChainReport verify_geometric_mean_step(std::size_t N, std::size_t P, double a, double b);

// Max over the grid of Z_{spec,1beta}(x) - Z_{spec,beta}(x^2); nonpositive up
// to rounding when the squaring inequality holds.  Requires |beta| == m.
double verify_squaring_inequality(const RateMatchSpec& spec, const std::string& beta,
                                  const std::vector<double>& grid);

struct SweepLimits {
    // geometric-mean suite
    std::size_t chain_n_max = 64;
    std::size_t chain_draws = 10000;  // total (a,b) draws across all (N,P) tuples
    std::uint64_t seed = 12345;
    // squaring suite
    unsigned squaring_m_min = 2;
    unsigned squaring_m_max = 4;
    std::size_t grid_points = 2049;
};

struct SweepFailure {
    std::string suite;
    std::string detail;
    double violation = 0.0;
};

struct SweepReport {
    std::size_t tuples = 0;
    double max_violation = 0.0;
    std::vector<SweepFailure> failures;  // entries exceeding the tolerance
};

// All power-of-two N up to chain_n_max, all P in [1, N], randomized (a,b).
SweepReport sweep_geometric_mean(const SweepLimits& limits, double tol = 1e-12);

// Both rate-match kinds, all odd counts, all |beta| == m paths, m in
// [squaring_m_min, squaring_m_max].
SweepReport sweep_squaring(const SweepLimits& limits, double tol = 1e-12);

}  // namespace polarpo
