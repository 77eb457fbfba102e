#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "polarpo/bec.hpp"
#include "polarpo/construction.hpp"
#include "polarpo/paths.hpp"
#include "polarpo/po.hpp"

using namespace polarpo;

namespace {

bool is_sorted_unique(const std::vector<std::size_t>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] <= v[i - 1]) return false;
    return true;
}

}  // namespace

TEST_CASE("polarization weights enumerate set bits of the index") {
    double beta = pw_beta();
    CHECK(beta == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));

    ReliabilityOrder w4 = pw_sequence(4);
    REQUIRE(w4.scores.size() == 4);
    CHECK(w4.scores[0] == 0.0);
    CHECK(w4.scores[1] == 1.0);
    CHECK(w4.scores[2] == doctest::Approx(beta).epsilon(1e-15));
    CHECK(w4.scores[3] == doctest::Approx(1.0 + beta).epsilon(1e-15));
    CHECK(w4.order == std::vector<std::size_t>{4, 3, 2, 1});
    CHECK(w4.provenance == "pw");

    ReliabilityOrder w8 = pw_sequence(8);
    CHECK(w8.order == std::vector<std::size_t>{8, 7, 6, 4, 5, 3, 2, 1});
    CHECK(w8.scores[7] == doctest::Approx(1.0 + beta + beta * beta).epsilon(1e-14));

    // order is a permutation sorted by descending score
    ReliabilityOrder w64 = pw_sequence(64);
    std::set<std::size_t> seen(w64.order.begin(), w64.order.end());
    CHECK(seen.size() == 64);
    for (std::size_t k = 1; k < 64; ++k)
        CHECK(w64.scores[w64.order[k - 1] - 1] >= w64.scores[w64.order[k] - 1]);

    CHECK_THROWS_AS(pw_sequence(12), std::invalid_argument);
}

TEST_CASE("mean-evolution reliabilities for the smallest block") {
    ReliabilityOrder r = ga_reliabilities(RateMatchSpec::none(), 2, 2.0);
    double m0 = 4.0 * std::pow(10.0, 2.0 / 10.0);
    REQUIRE(r.scores.size() == 2);
    CHECK(r.scores[1] == doctest::Approx(2.0 * m0).epsilon(1e-14));  // variable side adds means
    CHECK(r.scores[0] > 0.0);
    CHECK(r.scores[0] < m0);  // check side degrades
    CHECK(r.order == std::vector<std::size_t>{2, 1});
    CHECK(r.provenance.find("ga(") == 0);
}

TEST_CASE("variable side never scores below the check side of the same split") {
    for (const auto& spec : {RateMatchSpec::none(), RateMatchSpec::puncture(1, 2),
                             RateMatchSpec::shorten(1, 2)}) {
        ReliabilityOrder r = ga_reliabilities(spec, 16, 2.2);
        for (std::size_t i = 0; i < 16; i += 2) CHECK(r.scores[i + 1] >= r.scores[i]);
    }
}

TEST_CASE("rate-matched endpoints of the reliability ranking") {
    // punctured-dead channels land at the very bottom of the ranking
    ReliabilityOrder p = ga_reliabilities(RateMatchSpec::puncture(1, 2), 16, 2.0);
    auto dead = degenerate_positions(RateMatchSpec::puncture(1, 2), 16);
    std::set<std::size_t> dead_set(dead.begin(), dead.end());
    for (std::size_t k = 16 - dead.size(); k < 16; ++k)
        CHECK(dead_set.count(p.order[k]) == 1);
    for (std::size_t pos : dead) CHECK(p.scores[pos - 1] == 0.0);

    // certain channels of a shortened code rank on top with infinite score
    ReliabilityOrder s = ga_reliabilities(RateMatchSpec::shorten(1, 2), 16, 2.0);
    auto certain = degenerate_positions(RateMatchSpec::shorten(1, 2), 16);
    std::set<std::size_t> certain_set(certain.begin(), certain.end());
    for (std::size_t k = 0; k < certain.size(); ++k)
        CHECK(certain_set.count(s.order[k]) == 1);
    for (std::size_t pos : certain)
        CHECK(s.scores[pos - 1] == std::numeric_limits<double>::infinity());
}

TEST_CASE("scores rise with the design point") {
    ReliabilityOrder lo = ga_reliabilities(RateMatchSpec::puncture(1, 2), 16, 1.0);
    ReliabilityOrder hi = ga_reliabilities(RateMatchSpec::puncture(1, 2), 16, 3.0);
    auto dead = degenerate_positions(RateMatchSpec::puncture(1, 2), 16);
    std::set<std::size_t> dead_set(dead.begin(), dead.end());
    for (std::size_t pos = 1; pos <= 16; ++pos)
        if (!dead_set.count(pos)) CHECK(hi.scores[pos - 1] > lo.scores[pos - 1]);
}

TEST_CASE("information set selection skips degenerate channels") {
    auto spec = RateMatchSpec::puncture(1, 2);
    CHECK(select_info_set(pw_sequence(4), 2, spec, 4) == std::vector<std::size_t>{3, 4});

    auto all_usable = select_info_set(pw_sequence(16), 12, spec, 16);
    CHECK(all_usable.size() == 12);
    CHECK(is_sorted_unique(all_usable));
    for (std::size_t pos : all_usable) CHECK(pos > 4);  // quarter-punctured dead front

    CHECK_THROWS_AS(select_info_set(pw_sequence(16), 13, spec, 16), std::invalid_argument);
    CHECK_THROWS_AS(select_info_set(pw_sequence(16), 4, spec, 8), std::invalid_argument);
    CHECK(select_info_set(pw_sequence(16), 0, spec, 16).empty());

    auto shrt = RateMatchSpec::shorten(1, 2);
    auto sel = select_info_set(ga_reliabilities(shrt, 16, 2.0), 8, shrt, 16);
    CHECK(sel.size() == 8);
    for (std::size_t pos : sel) CHECK(pos <= 12);  // certain back positions excluded
}

TEST_CASE("order-driven selection matches a direct argsort") {
    for (const auto& spec : {RateMatchSpec::puncture(1, 2), RateMatchSpec::shorten(3, 2)}) {
        ReliabilityOrder r = ga_reliabilities(spec, 32, 2.2);
        auto dead = degenerate_positions(spec, 32);
        std::set<std::size_t> dead_set(dead.begin(), dead.end());
        std::size_t K = std::min<std::size_t>(10, 32 - dead.size());
        std::vector<std::size_t> want;
        for (std::size_t pos : r.order) {
            if (want.size() == K) break;
            if (!dead_set.count(pos)) want.push_back(pos);
        }
        std::sort(want.begin(), want.end());
        CHECK(select_info_set(r, K, spec, 32) == want);
    }
}

TEST_CASE("pair-driven improvement reaches a stable, order-respecting set") {
    auto spec = RateMatchSpec::puncture(1, 2);
    EnumerateResult enumr = enumerate_pairs(spec, 16, DominanceConfig::defaults(), {}, 1, true);
    ReliabilityOrder base = pw_sequence(16);

    for (std::size_t K : {2, 4, 6, 10}) {
        auto improved = improve_with_pos(base, enumr.pairs, K, spec);
        CHECK(improved.size() == K);
        CHECK(is_sorted_unique(improved));
        std::set<std::size_t> in(improved.begin(), improved.end());
        for (std::size_t pos : improved) CHECK(pos > 4);
        // fixpoint property: no certified pair has its weaker member inside
        // and its stronger member outside
        for (const auto& p : enumr.pairs) {
            std::size_t lo = path_position(p.lesser);
            std::size_t hi = path_position(p.greater);
            CHECK_MESSAGE(!(in.count(lo) && !in.count(hi)),
                          "K=" << K << " pair " << p.lesser << "," << p.greater);
        }
        // deterministic
        CHECK(improve_with_pos(base, enumr.pairs, K, spec) == improved);
    }

    // no pairs: plain top-K selection
    CHECK(improve_with_pos(base, {}, 5, spec) == select_info_set(base, 5, spec, 16));

    // pairs for a different block size are rejected
    EnumerateResult small = enumerate_pairs(spec, 8, DominanceConfig::defaults(), {}, 1, true);
    CHECK_THROWS_AS(improve_with_pos(base, small.pairs, 4, spec), std::invalid_argument);
}
