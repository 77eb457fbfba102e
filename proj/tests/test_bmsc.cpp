#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "polarpo/bec.hpp"
#include "polarpo/bmsc.hpp"
#include "polarpo/po.hpp"

using namespace polarpo;

namespace {

std::vector<std::string> all_paths(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t v = 0; v < (std::size_t(1) << n); ++v) {
        std::string w(n, '0');
        for (std::size_t k = 0; k < n; ++k)
            if (v >> (n - 1 - k) & 1) w[k] = '1';
        out.push_back(w);
    }
    return out;
}

}  // namespace

TEST_CASE("constructors produce valid channels with the textbook parameters") {
    for (double e : {0.0, 0.25, 0.5, 1.0}) {
        FiniteBmsc w = FiniteBmsc::bec(e);
        w.validate();
        CHECK(w.total_probability() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(w.bhattacharyya() == doctest::Approx(e).epsilon(1e-14));
        CHECK(w.certain_mass() == doctest::Approx(1.0 - e).epsilon(1e-14));
    }
    for (double d : {0.05, 0.11, 0.3, 0.45}) {
        FiniteBmsc w = FiniteBmsc::bsc(d);
        w.validate();
        CHECK(w.total_probability() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(w.bhattacharyya() ==
              doctest::Approx(2.0 * std::sqrt(d * (1.0 - d))).epsilon(1e-14));
    }
    CHECK(FiniteBmsc::perfect().bhattacharyya() == 0.0);
    CHECK(FiniteBmsc::pure_noise().bhattacharyya() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(FiniteBmsc::bsc(0.5).bhattacharyya() == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(FiniteBmsc::bec(1.2), std::invalid_argument);
    CHECK_THROWS_AS(FiniteBmsc::bsc(0.7), std::invalid_argument);
    CHECK_THROWS_AS(FiniteBmsc::from_atoms({{-1.0, 0.2}}, 0.0).validate(),
                    std::invalid_argument);
    CHECK_THROWS_AS(FiniteBmsc::from_atoms({{0.0, 2.0}}, 0.0).validate(),
                    std::invalid_argument);
}

TEST_CASE("erasure channels are closed under both transforms") {
    for (double a : {0.1, 0.4, 0.9})
        for (double b : {0.2, 0.5, 0.8}) {
            FiniteBmsc up = transform_up(FiniteBmsc::bec(a), FiniteBmsc::bec(b));
            FiniteBmsc dn = transform_down(FiniteBmsc::bec(a), FiniteBmsc::bec(b));
            up.validate();
            dn.validate();
            CHECK(up.bhattacharyya() == doctest::Approx(gate_up(a, b)).epsilon(1e-13));
            CHECK(dn.bhattacharyya() == doctest::Approx(gate_down(a, b)).epsilon(1e-13));
            CHECK(up.atoms().size() <= 1);  // still erasure-shaped
            CHECK(dn.atoms().size() <= 1);
        }
}

TEST_CASE("variable combining multiplies the parameter; check combining stays below the erasure value") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.02, 0.48);
    for (int t = 0; t < 25; ++t) {
        FiniteBmsc w1 = FiniteBmsc::bsc(u(rng));
        FiniteBmsc w2 = (t % 2) ? FiniteBmsc::bec(2 * u(rng)) : FiniteBmsc::bsc(u(rng));
        double z1 = w1.bhattacharyya(), z2 = w2.bhattacharyya();
        FiniteBmsc dn = transform_down(w1, w2);
        FiniteBmsc up = transform_up(w1, w2);
        dn.validate();
        up.validate();
        CHECK(dn.bhattacharyya() == doctest::Approx(z1 * z2).epsilon(1e-12));
        CHECK(up.bhattacharyya() <= z1 + z2 - z1 * z2 + 1e-12);
        CHECK(up.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(dn.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("single-step synthetic parameters match the closed forms") {
    FiniteBmsc w = FiniteBmsc::bsc(0.11);
    double z = 2.0 * std::sqrt(0.11 * 0.89);
    auto none = RateMatchSpec::none();
    CHECK(synthetic_bhattacharyya(w, none, "1") == doctest::Approx(z * z).epsilon(1e-12));
    double zup = synthetic_bhattacharyya(w, none, "0");
    CHECK(zup <= 2 * z - z * z + 1e-12);
    CHECK(zup >= z - 1e-12);  // the check combination degrades the channel
}

TEST_CASE("channel vectors carry the pattern at the right ends") {
    FiniteBmsc w = FiniteBmsc::bsc(0.2);
    auto vec = rate_matched_channel_vector(w, RateMatchSpec::puncture(1, 2), 8);
    REQUIRE(vec.size() == 8);
    CHECK(vec[0].bhattacharyya() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(vec[1].bhattacharyya() == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t i = 2; i < 8; ++i)
        CHECK(vec[i].bhattacharyya() == doctest::Approx(w.bhattacharyya()).epsilon(1e-14));

    auto svec = rate_matched_channel_vector(w, RateMatchSpec::shorten(1, 2), 8);
    CHECK(svec[6].bhattacharyya() == 0.0);
    CHECK(svec[7].bhattacharyya() == 0.0);
    CHECK(svec[0].bhattacharyya() == doctest::Approx(w.bhattacharyya()).epsilon(1e-14));

    CHECK_THROWS_AS(rate_matched_channel_vector(w, RateMatchSpec::puncture(1, 2), 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(rate_matched_channel_vector(w, RateMatchSpec::puncture(1, 2), 12),
                    std::invalid_argument);
}

TEST_CASE("erasure inputs reproduce the scalar evolution exactly") {
    std::vector<RateMatchSpec> specs{RateMatchSpec::none(), RateMatchSpec::puncture(1, 2),
                                     RateMatchSpec::puncture(3, 2), RateMatchSpec::shorten(1, 2),
                                     RateMatchSpec::shorten(3, 2)};
    std::mt19937 rng(17);
    for (const auto& spec : specs) {
        std::size_t m = spec.is_none() ? 1 : spec.m;
        for (double x : {0.2, 0.5, 0.8}) {
            FiniteBmsc w = FiniteBmsc::bec(x);
            for (int t = 0; t < 12; ++t) {
                std::string path;
                std::size_t len = m + rng() % 6;
                for (std::size_t k = 0; k < len; ++k) path += char('0' + (rng() & 1));
                CHECK(synthetic_bhattacharyya(w, spec, path) ==
                      doctest::Approx(path_bhattacharyya(spec, path, x)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("synthetic parameters sit between the squared-argument root and the direct value") {
    for (const auto& spec : {RateMatchSpec::puncture(1, 1), RateMatchSpec::shorten(1, 1),
                             RateMatchSpec::puncture(1, 2), RateMatchSpec::shorten(3, 2)}) {
        for (double d : {0.05, 0.15, 0.25, 0.35, 0.45}) {
            FiniteBmsc w = FiniteBmsc::bsc(d);
            for (const auto& tau : all_paths(spec.m)) {
                BoundsReport r = check_bounds(w, spec, tau);
                CHECK_MESSAGE(r.ok, spec.to_string() << " " << tau << " d=" << d);
                CHECK(r.lower ==
                      doctest::Approx(std::sqrt(path_bhattacharyya(spec, tau, r.x * r.x)))
                          .epsilon(1e-13));
                CHECK(r.upper == doctest::Approx(path_bhattacharyya(spec, tau, r.x)).epsilon(1e-13));
                CHECK(r.lower <= r.exact + 1e-12);
                CHECK(r.exact <= r.upper + 1e-12);
            }
        }
    }
    // for erasure inputs the direct value is attained
    for (const auto& spec : {RateMatchSpec::puncture(1, 2), RateMatchSpec::shorten(1, 2)}) {
        for (double e : {0.2, 0.6}) {
            FiniteBmsc w = FiniteBmsc::bec(e);
            for (const auto& tau : all_paths(3)) {
                BoundsReport r = check_bounds(w, spec, tau);
                CHECK(r.ok);
                CHECK(r.exact == doctest::Approx(r.upper).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("certified orders hold exactly on crossover channels") {
    // every pair the transfer machinery orders must be confirmed by the exact
    // synthetic parameters of an actual (non-erasure) channel family
    for (const auto& spec : {RateMatchSpec::puncture(1, 1), RateMatchSpec::shorten(1, 1)}) {
        auto paths = all_paths(3);
        std::vector<std::pair<std::string, std::string>> ordered;
        for (const auto& a : paths)
            for (const auto& b : paths) {
                if (a == b) continue;
                if (bmsc_transfer_bound(spec, a, b).verdict.holds()) ordered.push_back({a, b});
            }
        CHECK(!ordered.empty());
        for (double d : {0.05, 0.15, 0.25, 0.35, 0.45}) {
            FiniteBmsc w = FiniteBmsc::bsc(d);
            for (const auto& [a, b] : ordered) {
                double za = synthetic_bhattacharyya(w, spec, a);
                double zb = synthetic_bhattacharyya(w, spec, b);
                CHECK_MESSAGE(zb <= za + 1e-12, spec.to_string() << " " << a << " vs " << b
                                                                 << " d=" << d);
            }
        }
    }
    // the two composed forms agree with the exact parameters as well
    auto spec = RateMatchSpec::puncture(1, 2);
    PoPair thm = bmsc_transfer(spec, "01", "10");
    REQUIRE(thm.verdict.holds());
    PoPair cor = bmsc_transfer_corollary(spec, "01", "10");
    REQUIRE(cor.verdict.holds());
    for (double d : {0.1, 0.3}) {
        FiniteBmsc w = FiniteBmsc::bsc(d);
        CHECK(synthetic_bhattacharyya(w, spec, thm.greater) <=
              synthetic_bhattacharyya(w, spec, thm.lesser) + 1e-12);
        CHECK(synthetic_bhattacharyya(w, spec, cor.greater) <=
              synthetic_bhattacharyya(w, spec, cor.lesser) + 1e-12);
    }
}

TEST_CASE("exact mode enforces its caps") {
    auto none = RateMatchSpec::none();
    {
        // a 3000-atom alphabet squares past the pair budget
        std::vector<BmscAtom> atoms(3000);
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            double llr = 1e-7 * double(i + 1);
            atoms[i] = {llr, 1.0 / (double(atoms.size()) * (1.0 + std::exp(-llr)))};
        }
        FiniteBmsc wide = FiniteBmsc::from_atoms(atoms, 0.0);
        CHECK_THROWS_AS(transform_down(wide, wide), std::runtime_error);
    }
    FiniteBmsc w = FiniteBmsc::bsc(0.2);
    CHECK_THROWS_AS(synthetic_channel(w, none, std::string(17, '1')), std::invalid_argument);
    CHECK_THROWS_AS(synthetic_channel(w, RateMatchSpec::puncture(1, 2), "0"),
                    std::invalid_argument);
    // erasure-like channels stay exact at any length
    CHECK(synthetic_bhattacharyya(FiniteBmsc::bec(0.5), none, "0101010101") ==
          doctest::Approx(path_bhattacharyya(none, "0101010101", 0.5)).epsilon(1e-12));
}
