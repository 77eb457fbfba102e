#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "polarpo/rate_match.hpp"

namespace polarpo {

// One symmetric output pair of a binary-input memoryless symmetric channel,
// conditioned on the correct (all-zero) input: `prob` is the mass of the
// +llr output; the mirrored -llr output implicitly carries prob * exp(-llr).
struct BmscAtom {
    double llr = 0.0;   // nonnegative, finite
    double prob = 0.0;  // mass on the correct-sign side
};

// A BMSC with a finite symmetric output alphabet, stored in half-alphabet
// form.  Mass at LLR = +infinity lives in a dedicated `certain` bucket so no
// large floats enter the arithmetic.
class FiniteBmsc {
public:
    FiniteBmsc() = default;

    static FiniteBmsc bec(double erasure);
    static FiniteBmsc bsc(double crossover);
    static FiniteBmsc perfect();     // Z = 0 (shortened positions)
    static FiniteBmsc pure_noise();  // single LLR-0 output, Z = 1 (punctured positions)
    static FiniteBmsc from_atoms(std::vector<BmscAtom> atoms, double certain_mass);

    const std::vector<BmscAtom>& atoms() const { return atoms_; }
    double certain_mass() const { return certain_; }

    // Sum over the full symmetrized alphabet; 1 for a valid channel.
    double total_probability() const;
    double bhattacharyya() const;

    // Throws std::invalid_argument when the invariants fail.
    void validate() const;

private:
    std::vector<BmscAtom> atoms_;
    double certain_ = 0.0;

    void normalize_merge();
};

// Check-node (up) and variable-node (down) combination of two independent
// channels.  Output alphabets are merged by LLR magnitude.
FiniteBmsc transform_up(const FiniteBmsc& w1, const FiniteBmsc& w2);
FiniteBmsc transform_down(const FiniteBmsc& w1, const FiniteBmsc& w2);

// Length-N channel vector: punctured positions become pure noise, shortened
// positions become certain, the rest carry W.  Requires N >= 2^m.
std::vector<FiniteBmsc> rate_matched_channel_vector(const FiniteBmsc& w,
                                                    const RateMatchSpec& spec, std::size_t N);

// Exact synthetic channel / Bhattacharyya parameter for the given path over
// the rate-matched vector of length 2^|alpha|.  Exact mode: the output
// alphabet must stay within the engine's atom budget (paths up to length 4
// always do; BEC-like channels stay small at any length).
FiniteBmsc synthetic_channel(const FiniteBmsc& w, const RateMatchSpec& spec,
                             const std::string& alpha);
double synthetic_bhattacharyya(const FiniteBmsc& w, const RateMatchSpec& spec,
                               const std::string& alpha);

struct BoundsReport {
    std::string path;
    RateMatchSpec spec;
    double x = 0.0;      // Z(W)
    double lower = 0.0;  // sqrt(Z_path(x^2))
    double exact = 0.0;  // Z of the synthetic channel
    double upper = 0.0;  // Z_path(x)
    bool ok = false;     // lower <= exact <= upper within tolerance
};

BoundsReport check_bounds(const FiniteBmsc& w, const RateMatchSpec& spec,
                          const std::string& tau, double tol = 1e-12);

}  // namespace polarpo
