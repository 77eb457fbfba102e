#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "polarpo/convolution.hpp"
#include "polarpo/paths.hpp"

using namespace polarpo;

namespace {

// Independent butterfly trace: at the layer with operand offset h, positions i
// and i+h inside one aligned 2h-block feed the same gate.  Collects every
// operand pair of the length-N butterfly together with its layer number
// (1 = offset N/2).
std::set<std::pair<std::size_t, std::size_t>> trace_pairs(std::size_t N) {
    std::set<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t h = N / 2; h >= 1; h /= 2) {
        for (std::size_t base = 0; base < N; base += 2 * h)
            for (std::size_t i = base; i < base + h; ++i) out.insert({i + 1, i + 1 + h});
        if (h == 1) break;
    }
    return out;
}

unsigned trace_layer(std::size_t i, std::size_t j, std::size_t N) {
    unsigned layer = 1;
    for (std::size_t h = N / 2; h >= 1; h /= 2, ++layer) {
        if (j - i == h && (i - 1) / (2 * h) == (j - 1) / (2 * h)) return layer;
        if (h == 1) break;
    }
    return 0;
}

}  // namespace

TEST_CASE("convolves matches the butterfly trace") {
    for (std::size_t N : {2, 4, 8, 16, 32, 64, 128}) {
        auto oracle = trace_pairs(N);
        for (std::size_t i = 1; i <= N; ++i)
            for (std::size_t j = i + 1; j <= N; ++j) {
                bool expect = oracle.count({i, j}) > 0;
                CHECK_MESSAGE(convolves(i, j, N) == expect,
                              "N=" << N << " i=" << i << " j=" << j);
            }
    }
}

TEST_CASE("conv_layer matches the butterfly trace") {
    for (std::size_t N : {2, 4, 8, 16, 32, 64}) {
        for (std::size_t i = 1; i <= N; ++i)
            for (std::size_t j = i + 1; j <= N; ++j) {
                if (!convolves(i, j, N)) continue;
                CHECK(conv_layer(i, j, N) == trace_layer(i, j, N));
            }
    }
}

TEST_CASE("convolving pairs per layer partition the vector") {
    // each layer pairs every position exactly once
    const std::size_t N = 64;
    for (unsigned layer = 1; (std::size_t(1) << layer) <= N; ++layer) {
        std::vector<int> used(N + 1, 0);
        std::size_t pairs = 0;
        for (std::size_t i = 1; i <= N; ++i)
            for (std::size_t j = i + 1; j <= N; ++j)
                if (convolves(i, j, N) && conv_layer(i, j, N) == layer) {
                    ++used[i];
                    ++used[j];
                    ++pairs;
                }
        CHECK(pairs == N / 2);
        for (std::size_t p = 1; p <= N; ++p) CHECK(used[p] == 1);
    }
}

TEST_CASE("convolution mapping is a bijection of convolving pairs") {
    for (std::size_t K = 1; K <= 600; ++K) {
        ConvMapping m = build_convolution_mapping(K);
        REQUIRE(m.K == K);
        REQUIRE(m.to.size() == K + 1);
        std::size_t N = 1;
        while (N < 2 * K) N *= 2;
        std::set<std::size_t> images;
        for (std::size_t x = 1; x <= K; ++x) {
            std::size_t y = m.to[x];
            CHECK(y >= K + 1);
            CHECK(y <= 2 * K);
            images.insert(y);
            CHECK_MESSAGE(convolves(x, y, N), "K=" << K << " x=" << x << " y=" << y);
        }
        CHECK(images.size() == K);
    }
}

TEST_CASE("convolution mapping pair list is ordered outermost first") {
    for (std::size_t K : {5, 6, 7, 100, 255, 256, 257, 600}) {
        ConvMapping m = build_convolution_mapping(K);
        REQUIRE(m.pairs.size() == K);
        std::size_t prev_offset = std::size_t(-1);
        std::size_t prev_first = 0;
        std::set<std::pair<std::size_t, std::size_t>> seen;
        for (auto [x, y] : m.pairs) {
            std::size_t off = y - x;
            CHECK((off & (off - 1)) == 0);  // power-of-two operand offset
            if (off == prev_offset)
                CHECK(prev_first < x);
            else
                CHECK(off < prev_offset);
            prev_offset = off;
            prev_first = x;
            CHECK(m.to[x] == y);
            seen.insert({x, y});
        }
        CHECK(seen.size() == K);
    }
}

TEST_CASE("mapping for K=5 uses offsets 8, 4, 1") {
    ConvMapping m = build_convolution_mapping(5);
    CHECK(m.to[1] == 9);
    CHECK(m.to[2] == 10);
    CHECK(m.to[3] == 7);
    CHECK(m.to[4] == 8);
    CHECK(m.to[5] == 6);
}

TEST_CASE("path/position conversions invert each other") {
    for (std::size_t n = 1; n <= 10; ++n) {
        for (std::size_t pos = 1; pos <= (std::size_t(1) << n); ++pos) {
            std::string path = position_path(pos, n);
            CHECK(path.size() == n);
            CHECK(path_position(path) == pos);
        }
    }
}

TEST_CASE("path positions read MSB first") {
    CHECK(path_position("0") == 1);
    CHECK(path_position("1") == 2);
    CHECK(path_position("1100") == 13);
    CHECK(position_path(13, 4) == "1100");
    CHECK(path_position("0000000000") == 1);
    CHECK(path_position("1111111111") == 1024);
}

TEST_CASE("invalid paths and positions are rejected") {
    CHECK_THROWS_AS(check_path(""), std::invalid_argument);
    CHECK_THROWS_AS(check_path("01a"), std::invalid_argument);
    CHECK_THROWS_AS(path_position("2"), std::invalid_argument);
    CHECK_THROWS_AS(position_path(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(position_path(9, 3), std::invalid_argument);
    CHECK_THROWS_AS(position_path(1, 0), std::invalid_argument);
}
