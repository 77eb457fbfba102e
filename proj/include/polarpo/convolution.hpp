#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace polarpo {

// Two 1-based positions i < j of a length-N butterfly "convolve" when z_i and
// z_j are the two operands of one up/down gate at some polarization layer.
// Decided by the interval recursion: with 2^s < i <= 2^{s+1} and
// 2^q < j <= 2^{q+1} (i = 1 handled as s = -1), the pair convolves iff
// j - i = 2^q when s < q, or the pair (i - 2^q, j - 2^q) convolves when s = q.
bool convolves(std::size_t i, std::size_t j, std::size_t N);

// Layer at which a convolving pair meets: 1 is the outermost stage (operand
// offset N/2), log2(N) the innermost (offset 1).
unsigned conv_layer(std::size_t i, std::size_t j, std::size_t N);

// Bijection {1..K} -> {K+1..2K} in which every pair convolves inside the
// length-2^ceil(log2(2K)) butterfly.  Built by repeatedly pairing the widest
// power-of-two offset that fits the remaining gap, so `pairs` comes out
// ordered outermost layer first; ties share an offset and are ordered by
// first index.
struct ConvMapping {
    std::size_t K = 0;
    std::vector<std::size_t> to;                                 // to[x] for x in 1..K (index 0 unused)
    std::vector<std::pair<std::size_t, std::size_t>> pairs;      // construction order
};

ConvMapping build_convolution_mapping(std::size_t K);

}  // namespace polarpo
