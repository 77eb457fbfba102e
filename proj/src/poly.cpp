#include "polarpo/poly.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "polarpo/bec.hpp"

namespace polarpo {

void BigPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

BigPoly BigPoly::constant(long v) {
    BigPoly p;
    if (v != 0) p.c_ = {Int(v)};
    return p;
}

BigPoly BigPoly::x() {
    BigPoly p;
    p.c_ = {Int(0), Int(1)};
    return p;
}

BigPoly BigPoly::from_coefficients(std::vector<Int> coeffs) {
    BigPoly p;
    p.c_ = std::move(coeffs);
    p.trim();
    return p;
}

BigPoly operator+(const BigPoly& a, const BigPoly& b) {
    BigPoly r;
    r.c_.resize(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.c_.size(); ++i) {
        if (i < a.c_.size()) r.c_[i] += a.c_[i];
        if (i < b.c_.size()) r.c_[i] += b.c_[i];
    }
    r.trim();
    return r;
}

BigPoly operator-(const BigPoly& a, const BigPoly& b) {
    BigPoly r;
    r.c_.resize(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < r.c_.size(); ++i) {
        if (i < a.c_.size()) r.c_[i] += a.c_[i];
        if (i < b.c_.size()) r.c_[i] -= b.c_[i];
    }
    r.trim();
    return r;
}

BigPoly operator*(const BigPoly& a, const BigPoly& b) {
    BigPoly r;
    if (a.c_.empty() || b.c_.empty()) return r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, BigPoly::Int(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    r.trim();
    return r;
}

BigPoly BigPoly::substitute_square() const {
    BigPoly r;
    if (c_.empty()) return r;
    r.c_.assign(2 * c_.size() - 1, Int(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[2 * i] = c_[i];
    r.trim();
    return r;
}

BigPoly::Int BigPoly::evaluate_scaled_dyadic(const Int& numer, unsigned log_denom) const {
    if (c_.empty()) return Int(0);
    // Horner for sum_j a_j u^j 2^{k(d-j)}: r -> r*u + a_j << k*(d-j)
    Int r = c_.back();
    for (std::size_t j = c_.size() - 1; j-- > 0;) {
        r *= numer;
        r += c_[j] << (log_denom * (c_.size() - 1 - j));
    }
    return r;
}

namespace {

// num / 2^shift as double, assembled from the top 64 bits of num so that
// arbitrarily large integers convert without overflow.
double dyadic_ratio_to_double(const BigPoly::Int& num, long shift) {
    if (num == 0) return 0.0;
    bool neg = num < 0;
    BigPoly::Int mag = neg ? BigPoly::Int(-num) : num;
    long bits = long(boost::multiprecision::msb(mag)) + 1;
    double d;
    if (bits <= 62) {
        d = double(mag.convert_to<std::int64_t>());
        d = std::ldexp(d, long(-shift));
    } else {
        BigPoly::Int top = mag >> unsigned(bits - 62);
        d = double(top.convert_to<std::int64_t>());
        d = std::ldexp(d, (bits - 62) - shift);
    }
    return neg ? -d : d;
}

}  // namespace

double BigPoly::evaluate_dyadic(std::uint64_t numer, unsigned log_denom) const {
    if (c_.empty()) return 0.0;
    Int v = evaluate_scaled_dyadic(Int(numer), log_denom);
    return dyadic_ratio_to_double(v, long(log_denom) * long(c_.size() - 1));
}

std::string BigPoly::to_string() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t j = 0; j < c_.size(); ++j) {
        if (c_[j] == 0) continue;
        Int mag = c_[j] < 0 ? Int(-c_[j]) : c_[j];
        if (first) {
            if (c_[j] < 0) os << "-";
            first = false;
        } else {
            os << (c_[j] < 0 ? " - " : " + ");
        }
        if (j == 0 || mag != 1) os << mag.str();
        if (j >= 1) {
            os << "x";
            if (j >= 2) os << "^" << j;
        }
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const BigPoly& p) { return os << p.to_string(); }

BigPoly poly_up(const BigPoly& a, const BigPoly& b) { return a + b - a * b; }
BigPoly poly_down(const BigPoly& a, const BigPoly& b) { return a * b; }

namespace {

struct PolyOps {
    BigPoly up(const BigPoly& a, const BigPoly& b) const { return poly_up(a, b); }
    BigPoly down(const BigPoly& a, const BigPoly& b) const { return poly_down(a, b); }
};

}  // namespace

BigPoly path_polynomial(const RateMatchSpec& spec, const std::string& path, std::size_t max_len) {
    if (path.size() > max_len)
        throw std::invalid_argument("path_polynomial: path length exceeds exact-mode cap");
    return evolve_path(spec, path, BigPoly::x(), BigPoly::constant(1), BigPoly::constant(0),
                       PolyOps{});
}

std::vector<BigPoly> initial_poly_vector(const RateMatchSpec& spec, std::size_t N) {
    if (N == 0 || (N & (N - 1)) != 0)
        throw std::invalid_argument("initial_poly_vector: N must be a power of two");
    std::vector<BigPoly> z(N, BigPoly::x());
    if (spec.is_none()) return z;
    std::size_t count = spec.pattern_count(N);
    if (spec.kind == RateMatchKind::puncture) {
        for (std::size_t i = 0; i < count; ++i) z[i] = BigPoly::constant(1);
    } else {
        for (std::size_t i = 0; i < count; ++i) z[N - 1 - i] = BigPoly();
    }
    return z;
}

std::vector<BigPoly> polarize_poly_vector(std::vector<BigPoly> z) {
    std::size_t N = z.size();
    if (N == 0 || (N & (N - 1)) != 0)
        throw std::invalid_argument("polarize_poly_vector: length must be a power of two");
    for (std::size_t half = N / 2; half >= 1; half /= 2) {
        for (std::size_t base = 0; base < N; base += 2 * half) {
            for (std::size_t i = base; i < base + half; ++i) {
                BigPoly a = z[i], b = z[i + half];
                z[i] = poly_up(a, b);
                z[i + half] = poly_down(a, b);
            }
        }
        if (half == 1) break;
    }
    return z;
}

namespace {

using Int = BigPoly::Int;

// In place p(x) -> p(x+1)
void taylor_shift_one(std::vector<Int>& v) {
    if (v.size() < 2) return;
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        for (std::size_t j = v.size() - 2; j + 1 > i; --j) v[j] += v[j + 1];
}

// Scaled Bernstein coefficients c_k = sum_j C(d-j, k-j) a_j, computed as
// reverse -> shift by one -> reverse (c(x) = (1+x)^d a(x/(1+x))).
std::vector<Int> scaled_bernstein_of(std::vector<Int> v) {
    std::reverse(v.begin(), v.end());
    taylor_shift_one(v);
    std::reverse(v.begin(), v.end());
    return v;
}

struct CertifyCtx {
    const BigPoly* original;
    unsigned max_depth;
    SignReport out;
};

bool witness_at(CertifyCtx& ctx, const Int& numer, unsigned log_denom) {
    Int scaled = ctx.original->evaluate_scaled_dyadic(numer, log_denom);
    if (scaled >= 0) return false;
    ctx.out.status = SignStatus::negative_witness;
    ctx.out.witness_x = dyadic_ratio_to_double(numer, log_denom);
    ctx.out.witness_value = ctx.original->evaluate_dyadic(numer.convert_to<std::uint64_t>(),
                                                          log_denom);
    return true;
}

// q represents a positive multiple of the original restricted to
// [lo/2^depth, (lo+1)/2^depth], reparametrized to [0,1].  Returns true when
// the subtree is fully certified nonnegative; a found witness or exhausted
// depth stops the recursion via ctx.out.status.
bool subdivide(CertifyCtx& ctx, std::vector<Int> q, const Int& lo, unsigned depth) {
    std::vector<Int> c = scaled_bernstein_of(q);
    bool all_nonneg = true;
    for (const Int& v : c)
        if (v < 0) {
            all_nonneg = false;
            break;
        }
    if (all_nonneg) return true;
    if (c.front() < 0 && witness_at(ctx, lo, depth)) return false;
    if (c.back() < 0 && witness_at(ctx, lo + 1, depth)) return false;
    Int mid = 2 * lo + 1;
    if (witness_at(ctx, mid, depth + 1)) return false;
    if (depth >= ctx.max_depth) {
        ctx.out.status = SignStatus::unknown;
        return false;
    }
    // Integer-preserving halves: L(x) = 2^d q(x/2), R(x) = L(x+1).
    std::size_t d = q.size() - 1;
    std::vector<Int> left(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) left[j] = q[j] << unsigned(d - j);
    std::vector<Int> right = left;
    taylor_shift_one(right);
    if (!subdivide(ctx, std::move(left), 2 * lo, depth + 1)) return false;
    return subdivide(ctx, std::move(right), mid, depth + 1);
}

}  // namespace

std::vector<BigPoly::Int> scaled_bernstein(const BigPoly& p) {
    return scaled_bernstein_of(p.coefficients());
}

SignReport certify_nonnegative(const BigPoly& p, unsigned max_depth) {
    SignReport r;
    if (p.is_zero()) {
        r.status = SignStatus::nonnegative;
        return r;
    }
    CertifyCtx ctx{&p, max_depth, SignReport{}};
    ctx.out.status = SignStatus::nonnegative;
    if (subdivide(ctx, p.coefficients(), BigPoly::Int(0), 0)) {
        r.status = SignStatus::nonnegative;
        return r;
    }
    return ctx.out;
}

}  // namespace polarpo
