#include "polarpo/convolution.hpp"

#include <bit>
#include <stdexcept>

namespace polarpo {

namespace {

bool is_pow2(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

// floor(log2(v)) for v >= 1
int flog2(std::size_t v) { return std::bit_width(v) - 1; }

}  // namespace

bool convolves(std::size_t i, std::size_t j, std::size_t N) {
    if (!is_pow2(N) || N < 2) throw std::invalid_argument("convolves: N must be a power of two >= 2");
    if (i < 1 || j > N || i >= j) throw std::invalid_argument("convolves: need 1 <= i < j <= N");
    for (;;) {
        // j >= 2 always holds here since j > i >= 1.
        int q = flog2(j - 1);                    // 2^q < j <= 2^{q+1}
        int s = (i == 1) ? -1 : flog2(i - 1);    // i = 1 sits below every interval
        if (s < q) return j - i == (std::size_t{1} << q);
        // s == q: both in the same interval, shift it down and recurse.
        i -= std::size_t{1} << q;
        j -= std::size_t{1} << q;
    }
}

unsigned conv_layer(std::size_t i, std::size_t j, std::size_t N) {
    if (!convolves(i, j, N)) throw std::invalid_argument("conv_layer: pair does not convolve");
    // For a convolving pair the operand offset is (i-1) XOR (j-1) = 2^t and
    // the pair meets at layer log2(N) - t.
    std::size_t x = (i - 1) ^ (j - 1);
    return static_cast<unsigned>(flog2(N) - flog2(x));
}

ConvMapping build_convolution_mapping(std::size_t K) {
    if (K < 1) throw std::invalid_argument("build_convolution_mapping: K must be >= 1");
    ConvMapping mapping;
    mapping.K = K;
    mapping.to.assign(K + 1, 0);
    // Remaining unpaired block is always a contiguous run [lo, hi] centered on
    // the X/Y boundary; pair across the widest power-of-two offset that stays
    // inside it.  Span stays odd and shrinks, so the run always closes.
    std::size_t lo = 1, hi = 2 * K;
    while (lo < hi) {
        std::size_t span = hi - lo;
        std::size_t off = std::size_t{1} << flog2(span);
        for (std::size_t x = lo; x + off <= hi; ++x) {
            mapping.to[x] = x + off;
            mapping.pairs.emplace_back(x, x + off);
        }
        std::size_t nlo = hi - off + 1, nhi = lo + off - 1;
        lo = nlo;
        hi = nhi;
    }
    return mapping;
}

}  // namespace polarpo
