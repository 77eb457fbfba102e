#include "polarpo/construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "polarpo/bec.hpp"
#include "polarpo/paths.hpp"

namespace polarpo {

namespace {

// phi(x) approximates 1 - E[tanh(L/2)] for L ~ N(x, 2x), the check-node
// tracking function of Gaussian-approximation density evolution.  Everything
// runs on ln(phi) so deeply polarized means do not underflow.  Three
// segments: a quadratic exponent near 0 (exact phi(0) = 1), the classic
// stretched-exponential mid segment, and the asymptotic tail rescaled once to
// keep ln(phi) continuous at the joint.
constexpr double kSeg1End = 0.867861;
constexpr double kSeg2End = 10.677;

double ln_phi_seg2(double x) { return -0.4527 * std::pow(x, 0.86) + 0.0218; }

double ln_phi_tail_raw(double x) {
    return 0.5 * std::log(M_PI / x) - x / 4.0 + std::log1p(-10.0 / (7.0 * x));
}

const double kTailShift = ln_phi_seg2(kSeg2End) - ln_phi_tail_raw(kSeg2End);

double ln_phi(double x) {
    if (x <= 0.0) return 0.0;
    if (x <= kSeg1End) return 0.0564 * x * x - 0.4856 * x;
    if (x < kSeg2End) return ln_phi_seg2(x);
    return kTailShift + ln_phi_tail_raw(x);
}

double ln_phi_inverse(double t) {
    if (t >= 0.0) return 0.0;
    if (t >= ln_phi(kSeg1End)) {
        double disc = 0.4856 * 0.4856 + 4.0 * 0.0564 * t;
        return (0.4856 - std::sqrt(std::max(0.0, disc))) / (2.0 * 0.0564);
    }
    if (t >= ln_phi(kSeg2End)) return std::pow((0.0218 - t) / 0.4527, 1.0 / 0.86);
    double lo = kSeg2End, hi = std::max(40.0, -4.0 * t);
    while (ln_phi(hi) > t) hi *= 2.0;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        (ln_phi(mid) > t ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct GaMean {
    bool certain = false;
    double mean = 0.0;
};

GaMean ga_check(const GaMean& a, const GaMean& b) {
    if (a.certain) return b;
    if (b.certain) return a;
    if (a.mean == 0.0 || b.mean == 0.0) return {false, 0.0};
    double la = ln_phi(a.mean), lb = ln_phi(b.mean);
    double hi = std::max(la, lb), lo = std::min(la, lb);
    // ln(phi_a + phi_b - phi_a*phi_b)
    double lt = hi + std::log1p(std::exp(lo - hi) * (-std::expm1(hi)));
    return {false, ln_phi_inverse(lt)};
}

GaMean ga_variable(const GaMean& a, const GaMean& b) {
    if (a.certain || b.certain) return {true, 0.0};
    return {false, a.mean + b.mean};
}

}  // namespace

ReliabilityOrder ga_reliabilities(const RateMatchSpec& spec, std::size_t N,
                                  double design_snr_db) {
    if (N < 2 || (N & (N - 1)) != 0)
        throw std::invalid_argument("ga_reliabilities: N must be a power of two");
    if (!spec.is_none() && N < (std::size_t(1) << spec.m))
        throw std::invalid_argument("ga_reliabilities: N smaller than 2^m");
    if (!std::isfinite(design_snr_db))
        throw std::invalid_argument("ga_reliabilities: design SNR must be finite");

    double initial_mean = 4.0 * std::pow(10.0, design_snr_db / 10.0);
    std::vector<GaMean> state(N, GaMean{false, initial_mean});
    std::size_t count = spec.pattern_count(N);
    if (spec.kind == RateMatchKind::puncture) {
        for (std::size_t i = 0; i < count; ++i) state[i] = {false, 0.0};
    } else if (spec.kind == RateMatchKind::shorten) {
        for (std::size_t i = 0; i < count; ++i) state[N - 1 - i] = {true, 0.0};
    }

    for (std::size_t half = N / 2; half >= 1; half /= 2) {
        for (std::size_t base = 0; base < N; base += 2 * half) {
            for (std::size_t i = base; i < base + half; ++i) {
                GaMean u = ga_check(state[i], state[i + half]);
                GaMean d = ga_variable(state[i], state[i + half]);
                state[i] = u;
                state[i + half] = d;
            }
        }
        if (half == 1) break;
    }

    ReliabilityOrder out;
    out.N = N;
    out.provenance = "ga(snr_db=" + std::to_string(design_snr_db) + "," + spec.to_string() + ")";
    out.scores.resize(N);
    for (std::size_t i = 0; i < N; ++i)
        out.scores[i] = state[i].certain ? std::numeric_limits<double>::infinity()
                                         : state[i].mean;

    std::vector<std::size_t> dead = degenerate_positions(spec, N);
    std::vector<bool> punc_dead(N, false);
    if (spec.kind == RateMatchKind::puncture)
        for (std::size_t p : dead) punc_dead[p - 1] = true;

    out.order.resize(N);
    std::iota(out.order.begin(), out.order.end(), std::size_t(1));
    std::sort(out.order.begin(), out.order.end(), [&](std::size_t p, std::size_t q) {
        bool dp = punc_dead[p - 1], dq = punc_dead[q - 1];
        if (dp != dq) return !dp;  // fully punctured positions rank last
        double sp = out.scores[p - 1], sq = out.scores[q - 1];
        if (sp != sq) return sp > sq;
        return p < q;
    });
    return out;
}

double pw_beta() { return std::pow(2.0, 0.25); }

ReliabilityOrder pw_sequence(std::size_t N) {
    if (N < 2 || (N & (N - 1)) != 0)
        throw std::invalid_argument("pw_sequence: N must be a power of two");
    ReliabilityOrder out;
    out.N = N;
    out.provenance = "pw";
    out.scores.resize(N);
    double beta = pw_beta();
    for (std::size_t idx = 0; idx < N; ++idx) {
        double s = 0.0, w = 1.0;
        for (std::size_t bits = idx; bits != 0; bits >>= 1) {
            if (bits & 1) s += w;
            w *= beta;
        }
        out.scores[idx] = s;
    }
    out.order.resize(N);
    std::iota(out.order.begin(), out.order.end(), std::size_t(1));
    std::sort(out.order.begin(), out.order.end(), [&](std::size_t p, std::size_t q) {
        double sp = out.scores[p - 1], sq = out.scores[q - 1];
        if (sp != sq) return sp > sq;
        return p < q;
    });
    return out;
}

std::vector<std::size_t> select_info_set(const ReliabilityOrder& order, std::size_t K,
                                         const RateMatchSpec& spec, std::size_t N) {
    if (order.N != N) throw std::invalid_argument("select_info_set: order built for different N");
    std::vector<bool> dead(N, false);
    for (std::size_t p : degenerate_positions(spec, N)) dead[p - 1] = true;
    std::size_t usable = N - std::count(dead.begin(), dead.end(), true);
    if (K > usable) throw std::invalid_argument("select_info_set: K exceeds usable positions");
    std::vector<std::size_t> info;
    info.reserve(K);
    for (std::size_t p : order.order) {
        if (info.size() == K) break;
        if (!dead[p - 1]) info.push_back(p);
    }
    std::sort(info.begin(), info.end());
    return info;
}

std::vector<std::size_t> improve_with_pos(const ReliabilityOrder& base,
                                          const std::vector<PoPair>& pairs, std::size_t K,
                                          const RateMatchSpec& spec) {
    std::size_t N = base.N;
    std::vector<std::size_t> info = select_info_set(base, K, spec, N);
    std::vector<bool> member(N + 1, false);
    for (std::size_t p : info) member[p] = true;

    unsigned n = 0;
    while ((std::size_t(1) << n) < N) ++n;
    struct Swap {
        std::size_t lesser, greater;
    };
    std::vector<Swap> usable;
    for (const PoPair& pr : pairs) {
        if (!pr.verdict.holds()) continue;
        if (pr.lesser.size() != n || pr.greater.size() != n)
            throw std::invalid_argument("improve_with_pos: pair path length mismatch");
        usable.push_back({path_position(pr.lesser), path_position(pr.greater)});
    }
    std::sort(usable.begin(), usable.end(), [](const Swap& x, const Swap& y) {
        if (x.lesser != y.lesser) return x.lesser < y.lesser;
        return x.greater < y.greater;
    });

    std::size_t guard = usable.size() * K + 16;
    bool changed = true;
    std::size_t rounds = 0;
    while (changed) {
        changed = false;
        for (const Swap& s : usable) {
            if (member[s.lesser] && !member[s.greater]) {
                member[s.lesser] = false;
                member[s.greater] = true;
                changed = true;
            }
        }
        if (++rounds > guard)
            throw std::runtime_error("improve_with_pos: swap loop failed to reach a fixpoint");
    }

    std::vector<std::size_t> out;
    out.reserve(K);
    for (std::size_t p = 1; p <= N; ++p)
        if (member[p]) out.push_back(p);
    return out;
}

}  // namespace polarpo
