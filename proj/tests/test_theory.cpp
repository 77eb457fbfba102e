#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "polarpo/bec.hpp"
#include "polarpo/convolution.hpp"
#include "polarpo/poly.hpp"
#include "polarpo/theory.hpp"

using namespace polarpo;

TEST_CASE("averaging chain structure") {
    for (std::size_t N : {2, 4, 8, 16, 32}) {
        for (std::size_t P = 1; P <= N; ++P) {
            AveragingChain c = build_averaging_chain(N, P, 0.9, 0.3);
            std::size_t K = std::min(P, N - P);
            CHECK(c.schedule.size() == K);
            REQUIRE(c.z.size() == K + 1);

            // initial pattern
            for (std::size_t i = 0; i < N; ++i)
                CHECK(c.z[0][i] == (i < P ? 0.9 : 0.3));

            std::set<std::size_t> touched;
            std::size_t prev_offset = std::size_t(-1);
            std::size_t prev_first = 0;
            for (std::size_t k = 0; k < K; ++k) {
                auto [i, j] = c.schedule[k];
                REQUIRE(i < j);
                CHECK(convolves(i, j, N));  // replacements pair butterfly operands
                // one side starts as a, the other as b
                CHECK(((i <= P) != (j <= P)));
                touched.insert(i);
                touched.insert(j);
                std::size_t off = j - i;
                if (off == prev_offset)
                    CHECK(prev_first < i);
                else if (k > 0)
                    CHECK(off < prev_offset);
                prev_offset = off;
                prev_first = i;

                // step k replaces exactly this pair by the geometric mean
                const auto& before = c.z[k];
                const auto& after = c.z[k + 1];
                double g = std::sqrt(before[i - 1] * before[j - 1]);
                for (std::size_t p = 0; p < N; ++p) {
                    if (p == i - 1 || p == j - 1)
                        CHECK(after[p] == g);
                    else
                        CHECK(after[p] == before[p]);
                }
            }
            // the smaller side is fully absorbed, one pair per member
            CHECK(touched.size() == 2 * K);
        }
    }
}

TEST_CASE("single replacement can only improve the polarized vector") {
    ChainReport r = verify_geometric_mean_step(2, 1, 0.9, 0.3);
    CHECK(r.steps == 1);
    CHECK(!r.boundary);
    CHECK(r.max_violation <= 1e-12);

    // by hand: (0.9, 0.3) -> (0.93, 0.27); both entries sqrt(0.27) ->
    // (2g - g^2, 0.27) with 2g - g^2 < 0.93
    AveragingChain c = build_averaging_chain(2, 1, 0.9, 0.3);
    auto h0 = polarize_vector(c.z[0]);
    auto h1 = polarize_vector(c.z[1]);
    CHECK(h0[0] == doctest::Approx(0.93).epsilon(1e-15));
    CHECK(h0[1] == doctest::Approx(0.27).epsilon(1e-15));
    double g = std::sqrt(0.27);
    CHECK(h1[0] == doctest::Approx(2 * g - g * g).epsilon(1e-14));
    CHECK(h1[1] == doctest::Approx(0.27).epsilon(1e-14));
    CHECK(h1[0] < h0[0]);
}

TEST_CASE("chain descent holds across sizes, mirrored patterns and edges") {
    for (std::size_t N : {2, 4, 8, 16}) {
        for (std::size_t P = 1; P <= N; ++P) {
            for (auto [a, b] : {std::pair{0.9, 0.3}, {0.2, 0.7}, {0.5, 0.5}, {1.0, 0.4},
                                {0.0, 0.6}, {0.35, 0.0}}) {
                ChainReport r = verify_geometric_mean_step(N, P, a, b);
                CHECK_MESSAGE(r.max_violation <= 1e-12,
                              "N=" << N << " P=" << P << " a=" << a << " b=" << b);
                CHECK(r.boundary == (a == 0.0 || a == 1.0 || b == 0.0 || b == 1.0));
            }
        }
    }
}

TEST_CASE("averaging chain rejects bad parameters") {
    CHECK_THROWS_AS(build_averaging_chain(3, 1, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_averaging_chain(4, 0, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_averaging_chain(4, 5, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_averaging_chain(4, 2, 1.2, 0.5), std::invalid_argument);
}

TEST_CASE("front-level squaring comparison is nonpositive where proven") {
    auto grid = chebyshev_grid(2049);
    for (const auto& spec : {RateMatchSpec::puncture(1, 2), RateMatchSpec::shorten(1, 2),
                             RateMatchSpec::puncture(3, 2), RateMatchSpec::shorten(3, 2)}) {
        for (const std::string& beta :
             {std::string("00"), std::string("01"), std::string("10"), std::string("11")}) {
            double v = verify_squaring_inequality(spec, beta, grid);
            CHECK_MESSAGE(v <= 1e-12, spec.to_string() << " beta=" << beta << " v=" << v);

            // independent check, exact arithmetic: Z_beta(x^2) - Z_{1 beta}(x) >= 0
            BigPoly diff = path_polynomial(spec, beta).substitute_square() -
                           path_polynomial(spec, "1" + beta);
            CHECK_MESSAGE(certify_nonnegative(diff).status == SignStatus::nonnegative,
                          spec.to_string() << " beta=" << beta);
        }
    }
    CHECK_THROWS_AS(verify_squaring_inequality(RateMatchSpec::none(), "01", grid),
                    std::invalid_argument);
    CHECK_THROWS_AS(verify_squaring_inequality(RateMatchSpec::puncture(1, 2), "011", grid),
                    std::invalid_argument);
}

TEST_CASE("randomized geometric-mean sweep stays clean") {
    SweepLimits lim;
    lim.chain_n_max = 8;
    lim.chain_draws = 140;
    SweepReport r = sweep_geometric_mean(lim);
    CHECK(r.tuples == 2 + 4 + 8);
    CHECK(r.max_violation <= 1e-12);
    CHECK(r.failures.empty());

    SweepReport again = sweep_geometric_mean(lim);
    CHECK(again.max_violation == r.max_violation);  // seeded, reproducible
}

TEST_CASE("squaring sweep covers every count and pattern prefix") {
    SweepLimits lim;
    lim.squaring_m_min = 2;
    lim.squaring_m_max = 2;
    lim.grid_points = 257;
    SweepReport r = sweep_squaring(lim);
    CHECK(r.tuples == 2 * 2 * 4);
    CHECK(r.max_violation <= 1e-12);
    CHECK(r.failures.empty());
}
