#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polarpo/rate_match.hpp"

namespace polarpo {

// Dense polynomial with arbitrary-precision integer coefficients in the power
// basis, low degree first.  The zero polynomial has an empty coefficient
// vector.  This is the exact backend for erasure functions: path functions of
// rate-matched codes are integer polynomials in x.
class BigPoly {
  public:
    using Int = boost::multiprecision::cpp_int;

    BigPoly() = default;
    static BigPoly constant(long v);
    static BigPoly x();
    static BigPoly from_coefficients(std::vector<Int> coeffs);

    bool is_zero() const { return c_.empty(); }
    std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
    const std::vector<Int>& coefficients() const { return c_; }

    friend BigPoly operator+(const BigPoly& a, const BigPoly& b);
    friend BigPoly operator-(const BigPoly& a, const BigPoly& b);
    friend BigPoly operator*(const BigPoly& a, const BigPoly& b);
    bool operator==(const BigPoly& o) const { return c_ == o.c_; }
    bool operator!=(const BigPoly& o) const { return !(*this == o); }

    // P(x) -> P(x^2)
    BigPoly substitute_square() const;

    // Exact evaluation at the dyadic rational numer/2^log_denom in [0,1],
    // rounded to double only at the end.  Safe for any coefficient size.
    double evaluate_dyadic(std::uint64_t numer, unsigned log_denom) const;

    // 2^{log_denom * degree} * P(numer / 2^log_denom): integer whose sign is
    // the exact sign of P there.
    Int evaluate_scaled_dyadic(const Int& numer, unsigned log_denom) const;

    std::string to_string() const;

  private:
    std::vector<Int> c_;
    void trim();
};

std::ostream& operator<<(std::ostream& os, const BigPoly& p);

BigPoly poly_up(const BigPoly& a, const BigPoly& b);    // a + b - ab
BigPoly poly_down(const BigPoly& a, const BigPoly& b);  // ab

// Exact Z_{P,m,path} / Z_{S,m,path} as a polynomial in x.  Degree doubles per
// path bit, so exact mode is capped (default |path| <= 12, degree <= 4096).
BigPoly path_polynomial(const RateMatchSpec& spec, const std::string& path,
                        std::size_t max_len = 12);

// Polynomial-vector mirror of the numeric engine, for whole-vector identities.
std::vector<BigPoly> initial_poly_vector(const RateMatchSpec& spec, std::size_t N);
std::vector<BigPoly> polarize_poly_vector(std::vector<BigPoly> z);

// ---------------------------------------------------------------------------
// Sign certification on [0,1] by Bernstein-coefficient subdivision.
//
// The scaled Bernstein coefficients c_k = sum_j C(d-j, k-j) a_j are integer;
// all c_k >= 0 certifies nonnegativity on the interval.  Otherwise the
// interval is split in half (integer-preserving de Casteljau via scaling and
// Taylor shift) and both halves are examined; a strictly negative value at a
// dyadic point certifies failure with that point as witness.
// ---------------------------------------------------------------------------
enum class SignStatus { nonnegative, negative_witness, unknown };

struct SignReport {
    SignStatus status = SignStatus::unknown;
    double witness_x = 0.0;      // valid when status == negative_witness
    double witness_value = 0.0;  // P(witness_x), exactly negative
};

SignReport certify_nonnegative(const BigPoly& p, unsigned max_depth = 48);

// Exposed for testing: the scaled Bernstein coefficients of p on [0,1].
std::vector<BigPoly::Int> scaled_bernstein(const BigPoly& p);

}  // namespace polarpo
