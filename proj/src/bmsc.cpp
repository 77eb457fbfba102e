#include "polarpo/bmsc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polarpo/bec.hpp"
#include "polarpo/paths.hpp"

namespace polarpo {

namespace {

constexpr double kMergeBucket = 1e-12;
// Guard for exact mode: a transform may not produce more raw output atoms
// than this before merging.
constexpr std::size_t kPairBudget = 8u * 1024u * 1024u;

// Check-node LLR magnitude: log((1 + e^{a+b}) / (e^a + e^b)), computed
// without overflow.
double check_llr(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    double s = a + b;
    double d = std::abs(a - b);
    double c = std::min(a, b) + std::log1p(std::exp(-s)) - std::log1p(std::exp(-d));
    return std::max(0.0, c);
}

}  // namespace

void FiniteBmsc::normalize_merge() {
    for (BmscAtom& a : atoms_)
        if (a.llr < 0.0 && a.llr > -1e-15) a.llr = 0.0;
    std::sort(atoms_.begin(), atoms_.end(), [](const BmscAtom& x, const BmscAtom& y) {
        if (x.llr != y.llr) return x.llr < y.llr;
        return x.prob < y.prob;
    });
    std::vector<BmscAtom> merged;
    merged.reserve(atoms_.size());
    for (const BmscAtom& a : atoms_) {
        if (a.prob == 0.0) continue;
        if (!merged.empty() && a.llr - merged.back().llr <= kMergeBucket) {
            BmscAtom& b = merged.back();
            double p = b.prob + a.prob;
            b.llr = (b.llr * b.prob + a.llr * a.prob) / p;
            b.prob = p;
        } else {
            merged.push_back(a);
        }
    }
    atoms_ = std::move(merged);
}

FiniteBmsc FiniteBmsc::bec(double erasure) {
    if (!(erasure >= 0.0 && erasure <= 1.0))
        throw std::invalid_argument("bec: erasure probability outside [0,1]");
    FiniteBmsc w;
    w.certain_ = 1.0 - erasure;
    if (erasure > 0.0) w.atoms_.push_back({0.0, erasure / 2.0});
    return w;
}

FiniteBmsc FiniteBmsc::bsc(double crossover) {
    if (!(crossover >= 0.0 && crossover <= 0.5))
        throw std::invalid_argument("bsc: crossover probability outside [0, 1/2]");
    FiniteBmsc w;
    if (crossover == 0.0) {
        w.certain_ = 1.0;
    } else {
        w.atoms_.push_back({std::log((1.0 - crossover) / crossover), 1.0 - crossover});
    }
    return w;
}

FiniteBmsc FiniteBmsc::perfect() {
    FiniteBmsc w;
    w.certain_ = 1.0;
    return w;
}

FiniteBmsc FiniteBmsc::pure_noise() {
    FiniteBmsc w;
    w.atoms_.push_back({0.0, 0.5});
    return w;
}

FiniteBmsc FiniteBmsc::from_atoms(std::vector<BmscAtom> atoms, double certain_mass) {
    FiniteBmsc w;
    w.atoms_ = std::move(atoms);
    w.certain_ = certain_mass;
    w.normalize_merge();
    w.validate();
    return w;
}

namespace {

// Kahan-compensated sum keeps conservation checks meaningful on large
// alphabets.
double compensated_sum(double seed, const std::vector<BmscAtom>& atoms,
                       double (*term)(const BmscAtom&)) {
    double sum = seed, comp = 0.0;
    for (const BmscAtom& a : atoms) {
        double y = term(a) - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

}  // namespace

double FiniteBmsc::total_probability() const {
    return compensated_sum(certain_, atoms_, [](const BmscAtom& a) {
        return a.prob * (1.0 + std::exp(-a.llr));
    });
}

double FiniteBmsc::bhattacharyya() const {
    double z = compensated_sum(0.0, atoms_, [](const BmscAtom& a) {
        return 2.0 * a.prob * std::exp(-a.llr / 2.0);
    });
    return std::min(1.0, std::max(0.0, z));
}

void FiniteBmsc::validate() const {
    if (!(certain_ >= -1e-15) || !std::isfinite(certain_))
        throw std::invalid_argument("channel: negative certain mass");
    for (const BmscAtom& a : atoms_) {
        if (!std::isfinite(a.llr) || a.llr < 0.0)
            throw std::invalid_argument("channel: atom LLR must be finite and nonnegative");
        if (!std::isfinite(a.prob) || a.prob < -1e-15)
            throw std::invalid_argument("channel: atom probability must be nonnegative");
    }
    double total = total_probability();
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("channel: probability mass does not sum to 1");
}

FiniteBmsc transform_up(const FiniteBmsc& w1, const FiniteBmsc& w2) {
    const auto& a1 = w1.atoms();
    const auto& a2 = w2.atoms();
    std::size_t raw = a1.size() * a2.size() + a1.size() + a2.size();
    if (raw > kPairBudget)
        throw std::runtime_error("transform_up: output alphabet exceeds exact-mode budget");
    std::vector<BmscAtom> out;
    out.reserve(raw);
    double c1 = w1.certain_mass(), c2 = w2.certain_mass();
    // A certain operand passes the other operand through unchanged.
    for (const BmscAtom& a : a1)
        if (c2 > 0.0) out.push_back({a.llr, a.prob * c2});
    for (const BmscAtom& b : a2)
        if (c1 > 0.0) out.push_back({b.llr, b.prob * c1});
    for (const BmscAtom& a : a1)
        for (const BmscAtom& b : a2)
            out.push_back({check_llr(a.llr, b.llr),
                           a.prob * b.prob * (1.0 + std::exp(-(a.llr + b.llr)))});
    return FiniteBmsc::from_atoms(std::move(out), c1 * c2);
}

FiniteBmsc transform_down(const FiniteBmsc& w1, const FiniteBmsc& w2) {
    const auto& a1 = w1.atoms();
    const auto& a2 = w2.atoms();
    std::size_t raw = 2 * a1.size() * a2.size();
    if (raw > kPairBudget)
        throw std::runtime_error("transform_down: output alphabet exceeds exact-mode budget");
    std::vector<BmscAtom> out;
    out.reserve(raw);
    double c1 = w1.certain_mass(), c2 = w2.certain_mass();
    // A certain operand pushes the pair to certainty regardless of the other.
    double certain = c1 * c2;
    for (const BmscAtom& a : a1) certain += c2 * a.prob * (1.0 + std::exp(-a.llr));
    for (const BmscAtom& b : a2) certain += c1 * b.prob * (1.0 + std::exp(-b.llr));
    for (const BmscAtom& a : a1)
        for (const BmscAtom& b : a2) {
            double pp = a.prob * b.prob;
            out.push_back({a.llr + b.llr, pp});
            out.push_back({std::abs(a.llr - b.llr), pp * std::exp(-std::min(a.llr, b.llr))});
        }
    return FiniteBmsc::from_atoms(std::move(out), certain);
}

std::vector<FiniteBmsc> rate_matched_channel_vector(const FiniteBmsc& w,
                                                    const RateMatchSpec& spec, std::size_t N) {
    w.validate();
    if (N == 0 || (N & (N - 1)) != 0)
        throw std::invalid_argument("rate_matched_channel_vector: N must be a power of two");
    if (!spec.is_none() && N < (std::size_t(1) << spec.m))
        throw std::invalid_argument("rate_matched_channel_vector: N smaller than 2^m");
    std::vector<FiniteBmsc> vec(N, w);
    std::size_t count = spec.pattern_count(N);
    if (spec.kind == RateMatchKind::puncture) {
        for (std::size_t i = 0; i < count; ++i) vec[i] = FiniteBmsc::pure_noise();
    } else if (spec.kind == RateMatchKind::shorten) {
        for (std::size_t i = 0; i < count; ++i) vec[N - 1 - i] = FiniteBmsc::perfect();
    }
    return vec;
}

FiniteBmsc synthetic_channel(const FiniteBmsc& w, const RateMatchSpec& spec,
                             const std::string& alpha) {
    check_path(alpha);
    if (!spec.is_none() && alpha.size() < spec.m)
        throw std::invalid_argument("synthetic_channel: path shorter than m");
    if (alpha.size() > 16)
        throw std::invalid_argument("synthetic_channel: path too long for exact mode");
    std::vector<FiniteBmsc> vec =
        rate_matched_channel_vector(w, spec, std::size_t(1) << alpha.size());
    for (char bit : alpha) {
        std::size_t half = vec.size() / 2;
        std::vector<FiniteBmsc> next;
        next.reserve(half);
        for (std::size_t i = 0; i < half; ++i)
            next.push_back(bit == '0' ? transform_up(vec[i], vec[i + half])
                                      : transform_down(vec[i], vec[i + half]));
        vec = std::move(next);
    }
    return vec.front();
}

double synthetic_bhattacharyya(const FiniteBmsc& w, const RateMatchSpec& spec,
                               const std::string& alpha) {
    return synthetic_channel(w, spec, alpha).bhattacharyya();
}

BoundsReport check_bounds(const FiniteBmsc& w, const RateMatchSpec& spec,
                          const std::string& tau, double tol) {
    BoundsReport r;
    r.path = tau;
    r.spec = spec;
    r.x = w.bhattacharyya();
    r.lower = std::sqrt(path_bhattacharyya(spec, tau, r.x * r.x));
    r.exact = synthetic_bhattacharyya(w, spec, tau);
    r.upper = path_bhattacharyya(spec, tau, r.x);
    r.ok = r.lower <= r.exact + tol && r.exact <= r.upper + tol;
    return r;
}

}  // namespace polarpo
