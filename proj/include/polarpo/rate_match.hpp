#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polarpo {

enum class RateMatchKind { none, puncture, shorten };

// Sequential rate matching of a length-N polar code: a fraction numer/2^m of
// the code bits is removed, always as one contiguous run.  Puncturing takes
// the run from the front (those bits are never sent, erasure value 1),
// shortening takes it from the back (those bits are forced to 0 and known to
// the receiver, erasure value 0).  The numerator must be odd so the fraction
// is in lowest terms; m then fixes at which butterfly layer the pattern
// boundary resolves.
struct RateMatchSpec {
    RateMatchKind kind = RateMatchKind::none;
    unsigned numer = 0;  // P (puncture) or S (shorten), odd, < 2^m
    unsigned m = 0;      // denominator exponent

    static RateMatchSpec none() { return RateMatchSpec{}; }

    static RateMatchSpec puncture(unsigned p, unsigned m) {
        return make(RateMatchKind::puncture, p, m);
    }

    static RateMatchSpec shorten(unsigned s, unsigned m) {
        return make(RateMatchKind::shorten, s, m);
    }

    bool is_none() const { return kind == RateMatchKind::none; }

    // Number of punctured/shortened code bits in a length-N code.
    std::size_t pattern_count(std::size_t N) const {
        if (is_none()) return 0;
        if (N < (std::size_t{1} << m) || N % (std::size_t{1} << m) != 0)
            throw std::invalid_argument("rate match: N must be a multiple of 2^m");
        return numer * (N >> m);
    }

    std::string to_string() const {
        if (is_none()) return "none";
        std::string head = kind == RateMatchKind::puncture ? "punc:" : "short:";
        return head + std::to_string(numer) + "/" + std::to_string(1u << m);
    }

    // Accepts "none", "punc:P/2^m", "short:S/2^m" (denominator written out,
    // e.g. "punc:1/4" or "short:3/8").
    static RateMatchSpec parse(const std::string& s);

    bool operator==(const RateMatchSpec& o) const {
        if (kind != o.kind) return false;
        if (is_none()) return true;
        return numer == o.numer && m == o.m;
    }

private:
    static RateMatchSpec make(RateMatchKind kind, unsigned numer, unsigned m) {
        if (m == 0 || m > 30)
            throw std::invalid_argument("rate match: exponent m out of range");
        if (numer == 0 || numer % 2 == 0 || numer >= (1u << m))
            throw std::invalid_argument("rate match: numerator must be odd and < 2^m");
        RateMatchSpec r;
        r.kind = kind;
        r.numer = numer;
        r.m = m;
        return r;
    }
};

inline RateMatchSpec RateMatchSpec::parse(const std::string& s) {
    if (s == "none") return none();
    RateMatchKind kind;
    std::string rest;
    if (s.rfind("punc:", 0) == 0) {
        kind = RateMatchKind::puncture;
        rest = s.substr(5);
    } else if (s.rfind("short:", 0) == 0) {
        kind = RateMatchKind::shorten;
        rest = s.substr(6);
    } else {
        throw std::invalid_argument("rate match: unknown spec string '" + s + "'");
    }
    auto slash = rest.find('/');
    if (slash == std::string::npos)
        throw std::invalid_argument("rate match: missing '/' in '" + s + "'");
    unsigned long numer = 0, denom = 0;
    try {
        numer = std::stoul(rest.substr(0, slash));
        denom = std::stoul(rest.substr(slash + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("rate match: bad numbers in '" + s + "'");
    }
    if (denom < 2 || (denom & (denom - 1)) != 0)
        throw std::invalid_argument("rate match: denominator must be a power of two >= 2");
    unsigned m = 0;
    while ((1ul << m) < denom) ++m;
    return make(kind, static_cast<unsigned>(numer), m);
}

}  // namespace polarpo
