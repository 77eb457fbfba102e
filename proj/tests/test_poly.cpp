#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "polarpo/bec.hpp"
#include "polarpo/paths.hpp"
#include "polarpo/poly.hpp"

using namespace polarpo;
using Int = BigPoly::Int;

namespace {

BigPoly from_small(std::initializer_list<long> cs) {
    std::vector<Int> v;
    for (long c : cs) v.emplace_back(c);
    return BigPoly::from_coefficients(std::move(v));
}

// x^k (1-x)^(d-k) as an exact polynomial
BigPoly bernstein_basis(std::size_t k, std::size_t d) {
    BigPoly p = BigPoly::constant(1);
    BigPoly one_minus_x = BigPoly::constant(1) - BigPoly::x();
    for (std::size_t i = 0; i < k; ++i) p = p * BigPoly::x();
    for (std::size_t i = k; i < d; ++i) p = p * one_minus_x;
    return p;
}

}  // namespace

TEST_CASE("polynomial arithmetic basics") {
    BigPoly x = BigPoly::x();
    CHECK(BigPoly().is_zero());
    CHECK((x - x).is_zero());
    CHECK(from_small({3, 0, 0}) == BigPoly::constant(3));  // trailing zeros trimmed
    CHECK((x + x) * (x + x) == from_small({0, 0, 4}));
    CHECK((BigPoly::constant(1) - x) * (BigPoly::constant(1) + x) == from_small({1, 0, -1}));
    CHECK(from_small({0, 2, -1}).substitute_square() == from_small({0, 0, 2, 0, -1}));
    CHECK(from_small({0, 1, 1, -1}).degree() == 3);
    CHECK(poly_up(x, x) == from_small({0, 2, -1}));
    CHECK(poly_down(x, x) == from_small({0, 0, 1}));
}

TEST_CASE("quarter-punctured length-2 path polynomials are exact") {
    auto spec = RateMatchSpec::puncture(1, 2);
    CHECK(path_polynomial(spec, "00") == BigPoly::constant(1));
    CHECK(path_polynomial(spec, "01") == from_small({0, 2, -1}));
    CHECK(path_polynomial(spec, "10") == from_small({0, 1, 1, -1}));
    CHECK(path_polynomial(spec, "11") == from_small({0, 0, 0, 1}));
}

TEST_CASE("extending a quarter-punctured path by a front-level step") {
    // With u = x + x^2 - x^3, the four one-bit-deeper variable-side paths are
    // 2u - u^2, u^2, 2x^3 - x^6, x^6; squaring the base arguments of the
    // length-2 paths gives 1, 2x^2 - x^4, x^2 + x^4 - x^6, x^6.
    auto spec = RateMatchSpec::puncture(1, 2);
    BigPoly u = from_small({0, 1, 1, -1});
    CHECK(path_polynomial(spec, "100") == poly_up(u, u));
    CHECK(path_polynomial(spec, "101") == poly_down(u, u));
    CHECK(path_polynomial(spec, "110") == from_small({0, 0, 0, 2, 0, 0, -1}));
    CHECK(path_polynomial(spec, "111") == from_small({0, 0, 0, 0, 0, 0, 1}));

    CHECK(path_polynomial(spec, "00").substitute_square() == BigPoly::constant(1));
    CHECK(path_polynomial(spec, "01").substitute_square() == from_small({0, 0, 2, 0, -1}));
    CHECK(path_polynomial(spec, "10").substitute_square() ==
          from_small({0, 0, 1, 0, 1, 0, -1}));
    CHECK(path_polynomial(spec, "11").substitute_square() ==
          from_small({0, 0, 0, 0, 0, 0, 1}));
}

TEST_CASE("polynomial vector polarization matches per-path polynomials") {
    std::vector<RateMatchSpec> specs{RateMatchSpec::none(), RateMatchSpec::puncture(1, 2),
                                     RateMatchSpec::puncture(3, 2), RateMatchSpec::shorten(1, 2),
                                     RateMatchSpec::shorten(3, 3), RateMatchSpec::puncture(5, 3)};
    for (const auto& spec : specs) {
        auto vec = polarize_poly_vector(initial_poly_vector(spec, 8));
        REQUIRE(vec.size() == 8);
        for (std::size_t pos = 1; pos <= 8; ++pos)
            CHECK(vec[pos - 1] == path_polynomial(spec, position_path(pos, 3)));
    }
}

TEST_CASE("exact polynomials agree with the floating evolution at dyadic points") {
    auto spec = RateMatchSpec::shorten(3, 2);
    for (const std::string& w : {std::string("0110"), std::string("1010"), std::string("1101")}) {
        BigPoly p = path_polynomial(spec, w);
        for (std::uint64_t k = 0; k <= 64; ++k) {
            double x = double(k) / 64.0;
            CHECK(p.evaluate_dyadic(k, 6) ==
                  doctest::Approx(path_bhattacharyya(spec, w, x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("dyadic evaluation is exact") {
    BigPoly p = from_small({0, 2, -1});  // 2x - x^2
    CHECK(p.evaluate_dyadic(3, 2) == 0.9375);
    CHECK(p.evaluate_dyadic(0, 4) == 0.0);
    CHECK(p.evaluate_dyadic(16, 4) == 1.0);
    CHECK(p.evaluate_scaled_dyadic(Int(1), 1) == Int(3));  // 4 * p(1/2)
    CHECK(from_small({-1, 0, 4}).evaluate_scaled_dyadic(Int(1), 2) == Int(-12));
}

TEST_CASE("scaled Bernstein coefficients reconstruct the polynomial") {
    std::mt19937 rng(97);
    std::uniform_int_distribution<long> coeff(-9, 9);
    for (int t = 0; t < 60; ++t) {
        std::vector<Int> cs(1 + rng() % 9);
        for (auto& c : cs) c = coeff(rng);
        BigPoly p = BigPoly::from_coefficients(cs);
        if (p.is_zero()) continue;
        auto bern = scaled_bernstein(p);
        std::size_t d = p.degree();
        REQUIRE(bern.size() == d + 1);
        BigPoly rebuilt;
        for (std::size_t k = 0; k <= d; ++k)
            rebuilt = rebuilt + BigPoly::from_coefficients({bern[k]}) * bernstein_basis(k, d);
        CHECK(rebuilt == p);
    }
}

TEST_CASE("sign certification finds negativity exactly") {
    {
        auto r = certify_nonnegative(from_small({1, -2, 1}));  // (1-x)^2
        CHECK(r.status == SignStatus::nonnegative);
    }
    {
        auto r = certify_nonnegative(from_small({0, 1, -1}));  // x(1-x), zero at ends
        CHECK(r.status == SignStatus::nonnegative);
    }
    {
        // positive on [0,1] but with a negative Bernstein coefficient at depth 0
        auto r = certify_nonnegative(from_small({2, -5, 5}));
        CHECK(r.status == SignStatus::nonnegative);
    }
    {
        BigPoly p = from_small({3, -16, 16});  // dips to -1 at x = 1/2
        auto r = certify_nonnegative(p);
        REQUIRE(r.status == SignStatus::negative_witness);
        CHECK(r.witness_value < 0.0);
        CHECK(r.witness_x > 0.0);
        CHECK(r.witness_x < 1.0);
        // the witness point really is a point of negativity of p
        CHECK(p.evaluate_dyadic(std::uint64_t(std::ldexp(r.witness_x, 40)), 40) < 0.0);
    }
    {
        auto r = certify_nonnegative(from_small({0, 0, -1}));
        CHECK(r.status == SignStatus::negative_witness);
        CHECK(r.witness_value < 0.0);
    }
    CHECK(certify_nonnegative(BigPoly()).status == SignStatus::nonnegative);
}

TEST_CASE("path polynomial degree growth and cap") {
    auto spec = RateMatchSpec::puncture(1, 2);
    CHECK_THROWS_AS(path_polynomial(spec, std::string(13, '1')), std::invalid_argument);
    CHECK(path_polynomial(spec, std::string(12, '1'), 12).degree() == 3 * 1024);
    CHECK_THROWS_AS(initial_poly_vector(spec, 12), std::invalid_argument);
}
