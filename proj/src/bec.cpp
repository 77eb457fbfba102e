#include "polarpo/bec.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polarpo {

std::vector<double> chebyshev_grid(std::size_t points) {
    if (points < 2) throw std::invalid_argument("chebyshev_grid: need at least 2 points");
    std::vector<double> xs(points);
    for (std::size_t k = 0; k < points; ++k)
        xs[k] = (1.0 - std::cos(std::numbers::pi * double(k) / double(points - 1))) / 2.0;
    xs.front() = 0.0;
    xs.back() = 1.0;
    return xs;
}

std::vector<double> initial_vector(const RateMatchSpec& spec, std::size_t N, double x) {
    if (N == 0 || (N & (N - 1)) != 0) throw std::invalid_argument("initial_vector: N must be a power of two");
    std::vector<double> z(N, x);
    if (spec.is_none()) return z;
    std::size_t count = spec.pattern_count(N);
    if (spec.kind == RateMatchKind::puncture) {
        for (std::size_t i = 0; i < count; ++i) z[i] = 1.0;
    } else {
        for (std::size_t i = 0; i < count; ++i) z[N - 1 - i] = 0.0;
    }
    return z;
}

void polarize_vector_inplace(std::vector<double>& z) {
    std::size_t N = z.size();
    if (N == 0 || (N & (N - 1)) != 0) throw std::invalid_argument("polarize_vector: length must be a power of two");
    for (std::size_t half = N / 2; half >= 1; half /= 2) {
        for (std::size_t base = 0; base < N; base += 2 * half) {
            for (std::size_t i = base; i < base + half; ++i) {
                double a = z[i], b = z[i + half];
                z[i] = gate_up(a, b);
                z[i + half] = gate_down(a, b);
            }
        }
        if (half == 1) break;
    }
}

std::vector<double> polarize_vector(std::vector<double> z) {
    polarize_vector_inplace(z);
    return z;
}

double path_bhattacharyya(const RateMatchSpec& spec, const std::string& path, double x) {
    return evolve_path(spec, path, x, 1.0, 0.0, DoubleOps{});
}

std::vector<double> path_bhattacharyya_grid(const RateMatchSpec& spec, const std::string& path,
                                            const std::vector<double>& xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(path_bhattacharyya(spec, path, x));
    return out;
}

namespace {

// Symbol algebra for exact constancy detection: zero / one absorb or vanish
// in the gates exactly; gen marks a value strictly inside (0,1) for all
// x in (0,1), and both gates keep {gen with gen/partial} strictly interior
// unless an absorbing element applies.
enum class Sym { zero, one, gen };

struct SymOps {
    Sym up(Sym a, Sym b) const {
        if (a == Sym::one || b == Sym::one) return Sym::one;
        if (a == Sym::zero) return b;
        if (b == Sym::zero) return a;
        return Sym::gen;
    }
    Sym down(Sym a, Sym b) const {
        if (a == Sym::zero || b == Sym::zero) return Sym::zero;
        if (a == Sym::one) return b;
        if (b == Sym::one) return a;
        return Sym::gen;
    }
};

Sym evolve_symbol(const RateMatchSpec& spec, const std::string& path) {
    return evolve_path(spec, path, Sym::gen, Sym::one, Sym::zero, SymOps{});
}

}  // namespace

bool path_is_degenerate(const RateMatchSpec& spec, const std::string& path) {
    if (spec.is_none()) return false;
    // Constancy is decided by the first m bits; later bits preserve it.
    return evolve_symbol(spec, path.substr(0, std::min<std::size_t>(path.size(), spec.m))) != Sym::gen;
}

std::vector<std::size_t> degenerate_positions(const RateMatchSpec& spec, std::size_t N) {
    if (N == 0 || (N & (N - 1)) != 0)
        throw std::invalid_argument("degenerate_positions: N must be a power of two");
    std::vector<std::size_t> out;
    if (spec.is_none()) return out;
    unsigned n = unsigned(std::bit_width(N) - 1);
    if (n < spec.m) throw std::invalid_argument("degenerate_positions: N smaller than 2^m");
    std::size_t block = N >> spec.m;  // positions sharing an m-bit prefix
    for (std::size_t p = 0; p < (std::size_t(1) << spec.m); ++p) {
        std::string prefix(spec.m, '0');
        for (unsigned b = 0; b < spec.m; ++b)
            if (p & (std::size_t(1) << (spec.m - 1 - b))) prefix[b] = '1';
        if (evolve_symbol(spec, prefix) != Sym::gen)
            for (std::size_t k = 0; k < block; ++k) out.push_back(p * block + k + 1);
    }
    return out;
}

double traditional_f(const std::string& path, double x) {
    return path_bhattacharyya(RateMatchSpec::none(), path, x);
}

double traditional_f_inverse(const std::string& path, double y) {
    check_path(path);
    if (!(y >= 0.0 && y <= 1.0)) throw std::invalid_argument("traditional_f_inverse: y outside [0,1]");
    for (std::size_t k = path.size(); k-- > 0;) {
        y = path[k] == '1' ? std::sqrt(y) : 1.0 - std::sqrt(1.0 - y);
        if (y < 0.0) y = 0.0;
        if (y > 1.0) y = 1.0;
    }
    return y;
}

namespace {

struct LogOps {
    LogVal up(const LogVal& a, const LogVal& b) const {
        double l1m = a.l1m + b.l1m;
        return LogVal{log1mexp(l1m), l1m};
    }
    LogVal down(const LogVal& a, const LogVal& b) const {
        double lz = a.lz + b.lz;
        return LogVal{lz, log1mexp(lz)};
    }
};

}  // namespace

LogVal path_bhattacharyya_log(const RateMatchSpec& spec, const std::string& path, LogVal x) {
    const double inf = std::numeric_limits<double>::infinity();
    return evolve_path(spec, path, x, LogVal{0.0, -inf}, LogVal{-inf, 0.0}, LogOps{});
}

}  // namespace polarpo
