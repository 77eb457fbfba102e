#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polarpo {

// Polarization paths are bit strings: '0' = up branch (a (+) b = a+b-ab),
// '1' = down branch (a (*) b = ab).  The first character acts at the
// outermost butterfly stage (operand offset N/2).

inline void check_path(const std::string& path) {
    if (path.empty()) throw std::invalid_argument("path: must be non-empty");
    for (char c : path)
        if (c != '0' && c != '1')
            throw std::invalid_argument("path: invalid character in '" + path + "'");
}

// 1-based position of the path inside the length-2^n polarized vector:
// reading the path as a binary number, most significant bit first.
inline std::size_t path_position(const std::string& path) {
    check_path(path);
    std::size_t v = 0;
    for (char c : path) v = (v << 1) | static_cast<std::size_t>(c - '0');
    return v + 1;
}

// Inverse of path_position for a given path length n.
inline std::string position_path(std::size_t position, std::size_t n) {
    if (n == 0 || n > 63) throw std::invalid_argument("path: bad length");
    if (position < 1 || position > (std::size_t{1} << n))
        throw std::invalid_argument("path: position out of range");
    std::size_t v = position - 1;
    std::string path(n, '0');
    for (std::size_t k = 0; k < n; ++k)
        path[n - 1 - k] = static_cast<char>('0' + ((v >> k) & 1));
    return path;
}

}  // namespace polarpo
