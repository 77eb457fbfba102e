#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "polarpo/paths.hpp"
#include "polarpo/rate_match.hpp"

namespace polarpo {

// Erasure-domain polarization gates: the up (check) combination worsens the
// channel, the down (variable) combination improves it.  Gate outputs are
// clamped to [0,1] to absorb rounding at the 1e-16 level.
inline double gate_up(double a, double b) {
    double v = a + b - a * b;
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

inline double gate_down(double a, double b) {
    double v = a * b;
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

// ---------------------------------------------------------------------------
// Rate-matched path evolution over any value algebra.
//
// The initial vector of a sequentially rate-matched code is a two-value run
// pattern (A repeated c times, then B): puncturing has A = 1 (front), B = x;
// shortening has A = x, B = 0 (back), with c = numer*N/2^m counting the A-run
// (numer = 2^m - S for shortening).  One butterfly stage maps a run pattern to
// a run pattern with the denominator exponent reduced by one, and after m
// stages the vector is constant, from which point the scalar recursion
// applies.  Ops must provide up(a,b) and down(a,b).
// ---------------------------------------------------------------------------
template <class V, class Ops>
V evolve_path(const RateMatchSpec& spec, const std::string& path, const V& x_value,
              const V& one_value, const V& zero_value, const Ops& ops) {
    check_path(path);
    std::size_t pos = 0;
    V cur = x_value;
    if (!spec.is_none()) {
        if (path.size() < spec.m)
            throw std::invalid_argument("evolve_path: path shorter than rate-match exponent m");
        bool punc = spec.kind == RateMatchKind::puncture;
        V A = punc ? one_value : x_value;
        V B = punc ? x_value : zero_value;
        unsigned numer = punc ? spec.numer : ((1u << spec.m) - spec.numer);
        for (unsigned mu = spec.m; mu >= 1; --mu, ++pos) {
            bool dn = path[pos] == '1';
            unsigned half = 1u << (mu - 1);
            if (numer < half) {
                V nA = dn ? ops.down(A, B) : ops.up(A, B);
                V nB = dn ? ops.down(B, B) : ops.up(B, B);
                A = nA;
                B = nB;
            } else if (numer > half) {
                V nA = dn ? ops.down(A, A) : ops.up(A, A);
                V nB = dn ? ops.down(A, B) : ops.up(A, B);
                A = nA;
                B = nB;
                numer -= half;
            } else {
                // numer == half forces mu == 1 (numer is odd): the A-run fills
                // exactly the front half and the two runs merge to a constant.
                cur = dn ? ops.down(A, B) : ops.up(A, B);
            }
        }
    }
    for (; pos < path.size(); ++pos)
        cur = path[pos] == '1' ? ops.down(cur, cur) : ops.up(cur, cur);
    return cur;
}

struct DoubleOps {
    double up(double a, double b) const { return gate_up(a, b); }
    double down(double a, double b) const { return gate_down(a, b); }
};

// ---------------------------------------------------------------------------
// Numeric engine
// ---------------------------------------------------------------------------

// Chebyshev-Lobatto points on [0,1] (endpoints included, clustered there).
std::vector<double> chebyshev_grid(std::size_t points);

// Initial Bhattacharyya vector: puncture -> first numer*N/2^m entries 1,
// shorten -> last numer*N/2^m entries 0, remaining entries x.
std::vector<double> initial_vector(const RateMatchSpec& spec, std::size_t N, double x);

// Full butterfly h(Z), outermost stage first: entries i and i+N/2 combine to
// (up, down); up results fill the front half, down results the back half,
// recursively within halves.  Output position of a path equals 1 + its
// MSB-first binary value.
void polarize_vector_inplace(std::vector<double>& z);
std::vector<double> polarize_vector(std::vector<double> z);

// Z_{P,m,path}(x) / Z_{S,m,path}(x): the polarized value selected by the path.
double path_bhattacharyya(const RateMatchSpec& spec, const std::string& path, double x);

// Same function sampled on a grid of x values.
std::vector<double> path_bhattacharyya_grid(const RateMatchSpec& spec, const std::string& path,
                                            const std::vector<double>& xs);

// 1-based positions whose function is identically 1 (puncture) or 0
// (shorten); decided exactly on the {zero, one, generic} symbol algebra.
std::vector<std::size_t> degenerate_positions(const RateMatchSpec& spec, std::size_t N);

// True iff the path's function is constant 1 (puncture) / 0 (shorten).
bool path_is_degenerate(const RateMatchSpec& spec, const std::string& path);

// Traditional (mother code) polarization polynomial f_path and its inverse,
// first path bit applied first; inverses are composed in reverse from
// f1^{-1}(y) = sqrt(y) and f0^{-1}(y) = 1 - sqrt(1-y).
double traditional_f(const std::string& path, double x);
double traditional_f_inverse(const std::string& path, double y);

// ---------------------------------------------------------------------------
// Log-domain evaluation: tracks (log z, log(1-z)) through the evolution so
// behaviour within 1e-300 of the endpoints stays resolvable.  Used by the
// dominance checker's endpoint probes.
// ---------------------------------------------------------------------------
struct LogVal {
    double lz;   // log z
    double l1m;  // log (1-z)
};

inline double log1mexp(double t) {
    // log(1 - e^t) for t <= 0
    if (t >= 0.0) return -std::numeric_limits<double>::infinity();
    static const double ln2 = 0.6931471805599453;
    return t > -ln2 ? std::log(-std::expm1(t)) : std::log1p(-std::exp(t));
}

inline LogVal logval_from_x(double x) {
    return LogVal{std::log(x), std::log1p(-x)};
}

inline LogVal logval_near_zero(double log_x) { return LogVal{log_x, log1mexp(log_x)}; }
inline LogVal logval_near_one(double log_1mx) { return LogVal{log1mexp(log_1mx), log_1mx}; }

LogVal path_bhattacharyya_log(const RateMatchSpec& spec, const std::string& path, LogVal x);

}  // namespace polarpo
