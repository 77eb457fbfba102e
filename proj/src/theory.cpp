#include "polarpo/theory.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "polarpo/bec.hpp"
#include "polarpo/convolution.hpp"
#include "polarpo/paths.hpp"

namespace polarpo {

AveragingChain build_averaging_chain(std::size_t N, std::size_t P, double a, double b) {
    if (N < 2 || (N & (N - 1)) != 0)
        throw std::invalid_argument("build_averaging_chain: N must be a power of two");
    if (P < 1 || P > N) throw std::invalid_argument("build_averaging_chain: P outside [1, N]");
    if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0))
        throw std::invalid_argument("build_averaging_chain: a, b outside [0, 1]");

    AveragingChain chain;
    chain.N = N;
    chain.P = P;
    chain.a = a;
    chain.b = b;

    std::size_t K = std::min(P, N - P);
    if (K > 0) {
        ConvMapping mapping = build_convolution_mapping(K);
        for (const auto& [i, j] : mapping.pairs) {
            if (P <= N / 2)
                chain.schedule.emplace_back(i, j);
            else
                chain.schedule.emplace_back(N + 1 - j, N + 1 - i);
        }
        // Outermost stage first: descending operand offset, ties by index.
        std::sort(chain.schedule.begin(), chain.schedule.end(),
                  [](const auto& x, const auto& y) {
                      std::size_t ox = (x.first - 1) ^ (x.second - 1);
                      std::size_t oy = (y.first - 1) ^ (y.second - 1);
                      if (ox != oy) return ox > oy;
                      return x.first < y.first;
                  });
    }

    std::vector<double> cur(N, b);
    for (std::size_t i = 0; i < P; ++i) cur[i] = a;
    chain.z.push_back(cur);
    for (const auto& [i, j] : chain.schedule) {
        double g = std::sqrt(cur[i - 1] * cur[j - 1]);
        cur[i - 1] = g;
        cur[j - 1] = g;
        chain.z.push_back(cur);
    }
    return chain;
}

ChainReport verify_geometric_mean_step(std::size_t N, std::size_t P, double a, double b) {
    AveragingChain chain = build_averaging_chain(N, P, a, b);
    ChainReport rep;
    rep.steps = chain.schedule.size();
    rep.boundary = a == 0.0 || a == 1.0 || b == 0.0 || b == 1.0;
    std::vector<double> h_prev = polarize_vector(chain.z.front());
    for (std::size_t k = 1; k < chain.z.size(); ++k) {
        std::vector<double> h_next = polarize_vector(chain.z[k]);
        for (std::size_t c = 0; c < N; ++c)
            rep.max_violation = std::max(rep.max_violation, h_next[c] - h_prev[c]);
        h_prev = std::move(h_next);
    }
    return rep;
}

double verify_squaring_inequality(const RateMatchSpec& spec, const std::string& beta,
                                  const std::vector<double>& grid) {
    if (spec.is_none())
        throw std::invalid_argument("verify_squaring_inequality: needs a rate-match spec");
    check_path(beta);
    if (beta.size() != spec.m)
        throw std::invalid_argument("verify_squaring_inequality: |beta| must equal m");
    std::string onebeta = "1" + beta;
    double worst = 0.0;
    for (double x : grid) {
        double left = path_bhattacharyya(spec, beta, x * x);
        double right = path_bhattacharyya(spec, onebeta, x);
        worst = std::max(worst, right - left);
    }
    return worst;
}

SweepReport sweep_geometric_mean(const SweepLimits& limits, double tol) {
    SweepReport rep;
    std::vector<std::size_t> tuples_n;
    for (std::size_t N = 2; N <= limits.chain_n_max; N *= 2) tuples_n.push_back(N);
    std::size_t tuple_count = 0;
    for (std::size_t N : tuples_n) tuple_count += N;
    std::size_t per_tuple =
        tuple_count == 0 ? 0 : (limits.chain_draws + tuple_count - 1) / tuple_count;

    std::mt19937_64 rng(limits.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t N : tuples_n) {
        for (std::size_t P = 1; P <= N; ++P) {
            ++rep.tuples;
            for (std::size_t d = 0; d < per_tuple; ++d) {
                double a = unit(rng), b = unit(rng);
                ChainReport c = verify_geometric_mean_step(N, P, a, b);
                rep.max_violation = std::max(rep.max_violation, c.max_violation);
                if (c.max_violation > tol) {
                    rep.failures.push_back(
                        {"geometric-mean",
                         "N=" + std::to_string(N) + " P=" + std::to_string(P) +
                             " a=" + std::to_string(a) + " b=" + std::to_string(b),
                         c.max_violation});
                }
            }
        }
    }
    return rep;
}

SweepReport sweep_squaring(const SweepLimits& limits, double tol) {
    SweepReport rep;
    std::vector<double> grid = chebyshev_grid(limits.grid_points);
    for (unsigned m = limits.squaring_m_min; m <= limits.squaring_m_max; ++m) {
        for (int kind = 0; kind < 2; ++kind) {
            for (std::size_t count = 1; count < (std::size_t(1) << m); count += 2) {
                RateMatchSpec spec = kind == 0 ? RateMatchSpec::puncture(count, m)
                                               : RateMatchSpec::shorten(count, m);
                for (std::size_t bits = 0; bits < (std::size_t(1) << m); ++bits) {
                    std::string beta(m, '0');
                    for (unsigned k = 0; k < m; ++k)
                        if (bits & (std::size_t(1) << (m - 1 - k))) beta[k] = '1';
                    ++rep.tuples;
                    double v = verify_squaring_inequality(spec, beta, grid);
                    rep.max_violation = std::max(rep.max_violation, v);
                    if (v > tol)
                        rep.failures.push_back(
                            {"squaring", spec.to_string() + " beta=" + beta, v});
                }
            }
        }
    }
    return rep;
}

}  // namespace polarpo
