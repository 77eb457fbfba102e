#include "polarpo/po.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "polarpo/bec.hpp"
#include "polarpo/poly.hpp"

namespace polarpo {

std::string to_string(PoStatus s) {
    switch (s) {
        case PoStatus::CertifiedHolds: return "CertifiedHolds";
        case PoStatus::CertifiedFails: return "CertifiedFails";
        case PoStatus::NumericHolds: return "NumericHolds";
        case PoStatus::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

constexpr double kLn10 = 2.302585092994046;

PoVerdict verdict_holds(PoStatus grade, std::string evidence) {
    PoVerdict v;
    v.status = grade;
    v.evidence = std::move(evidence);
    return v;
}

// Function samples used by the numeric decision: values on the grid plus
// log-domain values at the endpoint probes.
struct FunctionData {
    std::vector<double> grid;
    std::vector<double> lz_near0;   // log Z at x = 10^-e
    std::vector<double> l1m_near1;  // log(1-Z) at x = 1 - 10^-e
};

FunctionData sample_function(const RateMatchSpec& spec, const std::string& path,
                             const std::vector<double>& xs, const DominanceConfig& cfg) {
    FunctionData d;
    d.grid = path_bhattacharyya_grid(spec, path, xs);
    d.lz_near0.reserve(cfg.probe_exponents.size());
    d.l1m_near1.reserve(cfg.probe_exponents.size());
    for (double e : cfg.probe_exponents) {
        LogVal v0 = path_bhattacharyya_log(spec, path, logval_near_zero(-e * kLn10));
        d.lz_near0.push_back(v0.lz);
        LogVal v1 = path_bhattacharyya_log(spec, path, logval_near_one(-e * kLn10));
        d.l1m_near1.push_back(v1.l1m);
    }
    return d;
}

// True when the claim Z_hi <= Z_lo survives the endpoint probes: an order
// reversal that is decisive in relative (log-domain) terms flags the claim
// even though it is below the absolute tolerance.
bool probes_clean(const FunctionData& lo, const FunctionData& hi, const DominanceConfig& cfg) {
    for (std::size_t k = 0; k < cfg.probe_exponents.size(); ++k) {
        double margin0 = cfg.probe_log_margin * std::max(1.0, std::abs(lo.lz_near0[k]));
        if (hi.lz_near0[k] - lo.lz_near0[k] > margin0) return false;
        double margin1 = cfg.probe_log_margin * std::max(1.0, std::abs(hi.l1m_near1[k]));
        if (lo.l1m_near1[k] - hi.l1m_near1[k] > margin1) return false;
    }
    return true;
}

// Grid decision for Z_greater <= Z_lesser.
PoVerdict numeric_dominates(const RateMatchSpec& spec, const std::string& lesser,
                            const std::string& greater, const DominanceConfig& cfg) {
    std::vector<double> xs = chebyshev_grid(cfg.grid_points);
    FunctionData dl = sample_function(spec, lesser, xs, cfg);
    FunctionData dg = sample_function(spec, greater, xs, cfg);
    double worst = 0.0;
    std::size_t worst_k = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        double viol = dg.grid[k] - dl.grid[k];
        if (viol > worst) {
            worst = viol;
            worst_k = k;
        }
    }
    std::string grid_tag = "grid:" + std::to_string(cfg.grid_points);
    if (worst > cfg.tolerance) {
        PoVerdict v;
        v.status = PoStatus::CertifiedFails;
        v.evidence = grid_tag;
        v.has_witness = true;
        v.witness_x = xs[worst_k];
        v.witness_z_lesser = dl.grid[worst_k];
        v.witness_z_greater = dg.grid[worst_k];
        return v;
    }
    if (!probes_clean(dl, dg, cfg))
        return verdict_holds(PoStatus::Inconclusive, grid_tag + "+endpoint-probe");
    return verdict_holds(PoStatus::NumericHolds, grid_tag + "+probes");
}

void validate_pair(const RateMatchSpec& spec, const std::string& a, const std::string& b) {
    check_path(a);
    check_path(b);
    if (a.size() != b.size()) throw std::invalid_argument("po: path lengths differ");
    if (!spec.is_none() && a.size() < spec.m)
        throw std::invalid_argument("po: paths shorter than rate-match exponent m");
}

// Marries a rule conclusion to its premise verdict: a certified premise keeps
// the certificate, a numeric premise downgrades to NumericHolds.
std::optional<PoVerdict> conclude(const char* rule, const PoVerdict& premise) {
    if (premise.status == PoStatus::CertifiedHolds)
        return verdict_holds(PoStatus::CertifiedHolds,
                             std::string("structural:") + rule + "(" + premise.evidence + ")");
    if (premise.status == PoStatus::NumericHolds)
        return verdict_holds(PoStatus::NumericHolds,
                             std::string("structural:") + rule + "(" + premise.evidence + ")");
    return std::nullopt;
}

// Length of the 0^p 1^{m-p} prefix form, or -1 if the first m bits are not of
// that shape.
int zeros_then_ones_prefix(const std::string& s, unsigned m) {
    unsigned p = 0;
    while (p < m && s[p] == '0') ++p;
    for (unsigned k = p; k < m; ++k)
        if (s[k] != '1') return -1;
    return int(p);
}

}  // namespace

PoVerdict structural_po(const RateMatchSpec& spec, const std::string& a, const std::string& b,
                        const DominanceConfig& cfg) {
    validate_pair(spec, a, b);
    std::size_t n = a.size();
    if (a == b) return verdict_holds(PoStatus::CertifiedHolds, "structural:reflexive");

    // R2: the greater path moves a '1' strictly earlier across identical
    // context (exactly two differing positions, 0...1 vs 1...0).
    {
        std::size_t first = n, second = n, diffs = 0;
        for (std::size_t k = 0; k < n && diffs <= 2; ++k)
            if (a[k] != b[k]) {
                ++diffs;
                if (diffs == 1)
                    first = k;
                else
                    second = k;
            }
        if (diffs == 2 && a[first] == '0' && a[second] == '1')
            return verdict_holds(PoStatus::CertifiedHolds, "structural:R2");
    }

    std::size_t m0 = spec.is_none() ? 0 : spec.m;

    // R5: identical leading n0 >= m bits; the comparison reduces to the
    // traditional PO on the suffixes (maximal strip; traditional f-maps are
    // onto [0,1], so any valid strip is equivalent).
    {
        std::size_t p = 0;
        while (p < n && a[p] == b[p]) ++p;
        if (p >= std::max<std::size_t>(m0, 1) && p < n) {
            PoVerdict premise =
                dominates(RateMatchSpec::none(), a.substr(p), b.substr(p), cfg);
            if (auto v = conclude("R5", premise)) return *v;
        }
    }

    // R4: identical first m-1 bits, then 0 (lesser) vs 1 (greater); transfers
    // the traditional PO on the full paths.
    if (!spec.is_none() && n >= spec.m) {
        bool prefix_ok = true;
        for (unsigned k = 0; k + 1 < spec.m; ++k)
            if (a[k] != b[k]) {
                prefix_ok = false;
                break;
            }
        if (prefix_ok && a[spec.m - 1] == '0' && b[spec.m - 1] == '1') {
            PoVerdict premise = dominates(RateMatchSpec::none(), a, b, cfg);
            if (auto v = conclude("R4", premise)) return *v;
        }
    }

    // R3: 1/2^m puncturing with 0^p 1^{m-p} prefixes, q <= p; transfers the
    // traditional PO on the full paths.
    if (spec.kind == RateMatchKind::puncture && spec.numer == 1 && n >= spec.m) {
        int p = zeros_then_ones_prefix(a, spec.m);
        int q = zeros_then_ones_prefix(b, spec.m);
        if (p >= 0 && q >= 0 && q <= p) {
            PoVerdict premise = dominates(RateMatchSpec::none(), a, b, cfg);
            if (auto v = conclude("R3", premise)) return *v;
        }
    }

    // R1: strip a common suffix, decide the fronts under the same spec.
    {
        std::size_t t = 0;
        while (t < n && a[n - 1 - t] == b[n - 1 - t]) ++t;
        if (t > 0 && n - t >= std::max<std::size_t>(m0, 1)) {
            PoVerdict premise = dominates(spec, a.substr(0, n - t), b.substr(0, n - t), cfg);
            if (auto v = conclude("R1", premise)) return *v;
        }
    }

    return verdict_holds(PoStatus::Inconclusive, "structural:none");
}

PoVerdict dominates(const RateMatchSpec& spec, const std::string& lesser,
                    const std::string& greater, const DominanceConfig& cfg) {
    validate_pair(spec, lesser, greater);
    if (lesser == greater) return verdict_holds(PoStatus::CertifiedHolds, "structural:reflexive");

    if (cfg.use_structural) {
        PoVerdict s = structural_po(spec, lesser, greater, cfg);
        if (s.holds()) return s;
    }

    if (lesser.size() <= cfg.exact_max_len) {
        BigPoly diff = path_polynomial(spec, lesser, cfg.exact_max_len) -
                       path_polynomial(spec, greater, cfg.exact_max_len);
        SignReport rep = certify_nonnegative(diff);
        if (rep.status == SignStatus::nonnegative)
            return verdict_holds(PoStatus::CertifiedHolds, "exact-bernstein");
        if (rep.status == SignStatus::negative_witness &&
            -rep.witness_value > cfg.tolerance) {
            PoVerdict v;
            v.status = PoStatus::CertifiedFails;
            v.evidence = "exact-bernstein";
            v.has_witness = true;
            v.witness_x = rep.witness_x;
            v.witness_z_lesser = path_bhattacharyya(spec, lesser, rep.witness_x);
            v.witness_z_greater = path_bhattacharyya(spec, greater, rep.witness_x);
            return v;
        }
        // sub-tolerance exact failure or exhausted subdivision: let the grid
        // method state the numeric result.
    }

    return numeric_dominates(spec, lesser, greater, cfg);
}

PoVerdict check_sufficient_condition(const RateMatchSpec& spec, const std::string& tau1,
                                     const std::string& tau2, const DominanceConfig& cfg) {
    if (spec.is_none())
        throw std::invalid_argument("check_sufficient_condition: needs a rate-match spec");
    check_path(tau1);
    check_path(tau2);
    if (tau1.size() != spec.m || tau2.size() != spec.m)
        throw std::invalid_argument("check_sufficient_condition: |tau| must equal m");
    if (tau1 == tau2) return verdict_holds(PoStatus::CertifiedHolds, "structural:reflexive");

    // gamma1 vs gamma0: h_{gamma 1} <= h_{gamma 0} always — the comparison
    // clears its radicals down to (U - L)^2 >= 0.
    {
        bool same_front = std::equal(tau1.begin(), tau1.end() - 1, tau2.begin());
        if (same_front && tau1.back() == '1' && tau2.back() == '0')
            return verdict_holds(PoStatus::CertifiedHolds, "structural:gamma-split");
    }

    // 0^k 1^{m-k} chain under 1/2^m puncturing: h decreases as ones increase.
    if (spec.kind == RateMatchKind::puncture && spec.numer == 1) {
        int p1 = zeros_then_ones_prefix(tau1, spec.m);
        int p2 = zeros_then_ones_prefix(tau2, spec.m);
        if (p1 >= 0 && p2 >= 0 && p1 <= p2)
            return verdict_holds(PoStatus::CertifiedHolds, "structural:zeros-ones-chain");
    }

    // Numeric grid on h = f^{-1} ∘ Z.  Witness fields carry (h_tau1, h_tau2)
    // in (witness_z_greater, witness_z_lesser): tau1's value is the violator.
    std::vector<double> xs = chebyshev_grid(cfg.grid_points);
    double worst = 0.0;
    std::size_t worst_k = 0;
    std::vector<double> h1v(xs.size()), h2v(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
        h1v[k] = traditional_f_inverse(tau1, path_bhattacharyya(spec, tau1, xs[k]));
        h2v[k] = traditional_f_inverse(tau2, path_bhattacharyya(spec, tau2, xs[k]));
        double viol = h1v[k] - h2v[k];
        if (viol > worst) {
            worst = viol;
            worst_k = k;
        }
    }
    std::string grid_tag = "grid:" + std::to_string(cfg.grid_points);
    if (worst > cfg.tolerance) {
        PoVerdict v;
        v.status = PoStatus::CertifiedFails;
        v.evidence = grid_tag;
        v.has_witness = true;
        v.witness_x = xs[worst_k];
        v.witness_z_greater = h1v[worst_k];
        v.witness_z_lesser = h2v[worst_k];
        return v;
    }
    return verdict_holds(PoStatus::NumericHolds, grid_tag);
}

namespace {

PoPair transfer_common(const RateMatchSpec& spec, std::string lesser, std::string greater,
                       const PoVerdict& premise, const char* rule) {
    PoPair out;
    out.lesser = std::move(lesser);
    out.greater = std::move(greater);
    out.sense = PoSense::bmsc;
    out.spec = spec;
    out.rule = rule;
    if (premise.status == PoStatus::CertifiedHolds || premise.status == PoStatus::NumericHolds) {
        out.verdict = verdict_holds(premise.status,
                                    std::string(rule) + "(" + premise.evidence + ")");
    } else {
        out.verdict.status = PoStatus::Inconclusive;
        out.verdict.evidence =
            std::string(rule) + ":premise-" + to_string(premise.status);
    }
    return out;
}

}  // namespace

PoPair bmsc_transfer(const RateMatchSpec& spec, const std::string& gamma,
                     const std::string& alpha, const DominanceConfig& cfg) {
    PoVerdict premise = dominates(spec, gamma, alpha, cfg);
    return transfer_common(spec, gamma + "1", "1" + alpha, premise, "transfer-theorem");
}

PoPair bmsc_transfer_corollary(const RateMatchSpec& spec, const std::string& gamma,
                               const std::string& alpha, const DominanceConfig& cfg) {
    PoVerdict premise = dominates(spec, "1" + gamma, alpha + "1", cfg);
    return transfer_common(spec, gamma, alpha, premise, "transfer-corollary");
}

namespace {

std::vector<double> uniform_grid(std::size_t points) {
    if (points < 2) throw std::invalid_argument("uniform_grid: need at least 2 points");
    std::vector<double> xs(points);
    for (std::size_t k = 0; k < points; ++k) xs[k] = double(k) / double(points - 1);
    return xs;
}

std::string transfer_bound_tag(const DominanceConfig& cfg) {
    std::string tag = "ugrid:" + std::to_string(cfg.transfer_grid_points);
    if (cfg.transfer_tolerance != 0.0) {
        char buf[32];
        std::snprintf(buf, sizeof buf, ",tol:%g", cfg.transfer_tolerance);
        tag += buf;
    }
    return tag;
}

}  // namespace

PoPair bmsc_transfer_bound(const RateMatchSpec& spec, const std::string& a, const std::string& b,
                           const DominanceConfig& cfg) {
    validate_pair(spec, a, b);
    PoPair out;
    out.lesser = a;
    out.greater = b;
    out.sense = PoSense::bmsc;
    out.spec = spec;
    out.rule = "transfer-bound";
    if (a == b) {
        out.verdict = verdict_holds(PoStatus::CertifiedHolds, "structural:reflexive");
        return out;
    }
    std::vector<double> xs = uniform_grid(cfg.transfer_grid_points);
    std::vector<double> xs2(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) xs2[k] = xs[k] * xs[k];
    std::vector<double> upper = path_bhattacharyya_grid(spec, b, xs);
    std::vector<double> lower = path_bhattacharyya_grid(spec, a, xs2);
    for (std::size_t k = 0; k < xs.size(); ++k)
        if (upper[k] * upper[k] > lower[k] + cfg.transfer_tolerance) {
            out.verdict.status = PoStatus::Inconclusive;
            out.verdict.evidence = "transfer-bound:no-certificate(" + transfer_bound_tag(cfg) + ")";
            return out;
        }
    out.verdict =
        verdict_holds(PoStatus::NumericHolds, "transfer-bound(" + transfer_bound_tag(cfg) + ")");
    return out;
}

// ---------------------------------------------------------------------------
// Pair enumeration
// ---------------------------------------------------------------------------

namespace {

std::string path_of_value(std::uint32_t value, unsigned n) {
    std::string s(n, '0');
    for (unsigned k = 0; k < n; ++k)
        if (value & (std::uint32_t(1) << (n - 1 - k))) s[k] = '1';
    return s;
}

// Z_alpha <= Z_gamma on the grid, endpoint probes clean.
bool premise_ok(const FunctionData& g, const FunctionData& a, const DominanceConfig& cfg) {
    for (std::size_t k = 0; k < g.grid.size(); ++k)
        if (a.grid[k] > g.grid[k] + cfg.tolerance) return false;
    return probes_clean(g, a, cfg);
}

struct TraditionalCache {
    const DominanceConfig& cfg;
    const std::vector<double>& xs;
    std::unordered_map<std::uint64_t, FunctionData> map;
    std::mutex mu;

    const FunctionData& get(unsigned len, std::uint32_t value) {
        std::uint64_t key = (std::uint64_t(len) << 32) | value;
        std::lock_guard<std::mutex> lock(mu);
        auto it = map.find(key);
        if (it == map.end()) {
            it = map.emplace(key, sample_function(RateMatchSpec::none(),
                                                  path_of_value(value, len), xs, cfg))
                     .first;
        }
        return it->second;
    }
};

}  // namespace

EnumerateResult enumerate_pairs(const RateMatchSpec& spec, std::size_t N,
                                const DominanceConfig& cfg, const MotherPoHook& hook,
                                unsigned threads, bool collect_pairs) {
    if (N < 2 || (N & (N - 1)) != 0 || N > (std::size_t(1) << 16))
        throw std::invalid_argument("enumerate_pairs: N must be a power of two in [2, 65536]");
    unsigned n = unsigned(std::bit_width(N) - 1);
    if (!spec.is_none() && n < spec.m)
        throw std::invalid_argument("enumerate_pairs: N smaller than 2^m");
    if (threads == 0) threads = 1;

    EnumerateResult res;
    res.builtin_hook = !hook;

    // Non-degenerate paths in position order.
    std::vector<std::uint32_t> paths;
    {
        std::vector<std::size_t> dead = degenerate_positions(spec, N);
        std::vector<bool> is_dead(N, false);
        for (std::size_t p : dead) is_dead[p - 1] = true;
        for (std::size_t v = 0; v < N; ++v)
            if (!is_dead[v]) paths.push_back(std::uint32_t(v));
    }
    std::size_t M = paths.size();
    res.candidates = M * (M - 1) / 2;
    if (M < 2) return res;

    std::vector<double> xs = chebyshev_grid(cfg.grid_points);
    unsigned m0 = spec.is_none() ? 0 : spec.m;

    // Transfer-bound tables on the uniform grid: for each path w, the square
    // of Z_w(x) (an upper bound on Z(W^w), squared) and Z_w(x^2) (the squared
    // lower bound).  A pair is ordered when one path's upper table sits at or
    // below the other's lower table at every grid point.
    std::vector<double> txs = uniform_grid(cfg.transfer_grid_points);
    std::vector<double> txs2(txs.size());
    for (std::size_t k = 0; k < txs.size(); ++k) txs2[k] = txs[k] * txs[k];
    std::vector<std::vector<double>> upper(M), lower(M);
    for (std::size_t i = 0; i < M; ++i) {
        std::string w = path_of_value(paths[i], n);
        upper[i] = path_bhattacharyya_grid(spec, w, txs);
        for (double& z : upper[i]) z = z * z;
        lower[i] = path_bhattacharyya_grid(spec, w, txs2);
    }
    const double ttol = cfg.transfer_tolerance;
    auto squeezed = [&](std::size_t lo_i, std::size_t up_j) {
        const std::vector<double>& u = upper[up_j];
        const std::vector<double>& l = lower[lo_i];
        for (std::size_t k = 0; k < u.size(); ++k)
            if (u[k] > l[k] + ttol) return false;
        return true;
    };
    res.certification = "transfer-bound(" + transfer_bound_tag(cfg) + ")";

    TraditionalCache trad{cfg, xs, {}, {}};
    std::mutex hook_mu;

    // Decide one unordered pair (indices into paths); returns (theorem,
    // prefix) flags and fills the record when requested.
    auto decide = [&](std::size_t i, std::size_t j, PoPair* rec) {
        struct Flags {
            bool theorem = false, prefix = false;
        } f;
        std::uint32_t u = paths[i], v = paths[j];
        if (squeezed(i, j)) {
            f.theorem = true;  // u lesser, v greater
        } else if (squeezed(j, i)) {
            f.theorem = true;
            std::swap(u, v);
        }
        if (f.theorem) {
            if (rec) {
                rec->lesser = path_of_value(u, n);
                rec->greater = path_of_value(v, n);
                rec->sense = PoSense::bmsc;
                rec->spec = spec;
                rec->rule = "transfer-bound";
                rec->verdict = verdict_holds(PoStatus::NumericHolds, res.certification);
            }
            return f;
        }
        // Prefix-stripped comparison through the mother-code hook.
        unsigned p = n - unsigned(std::bit_width(u ^ v));
        if (p >= std::max(m0, 1u)) {
            unsigned sl = n - p;
            std::uint32_t su = u & ((std::uint32_t(1) << sl) - 1);
            std::uint32_t sv = v & ((std::uint32_t(1) << sl) - 1);
            bool fwd = false, used = false;
            if (hook) {
                std::lock_guard<std::mutex> lock(hook_mu);
                fwd = hook(path_of_value(su, sl), path_of_value(sv, sl));
                if (!fwd && hook(path_of_value(sv, sl), path_of_value(su, sl))) {
                    fwd = true;
                    std::swap(u, v);
                }
                used = fwd;
            } else {
                const FunctionData& du = trad.get(sl, su);
                const FunctionData& dv = trad.get(sl, sv);
                if (premise_ok(du, dv, cfg))  // Z_sv <= Z_su: u lesser
                    used = true;
                else if (premise_ok(dv, du, cfg)) {
                    used = true;
                    std::swap(u, v);
                }
            }
            if (used) {
                f.prefix = true;
                if (rec) {
                    rec->lesser = path_of_value(u, n);
                    rec->greater = path_of_value(v, n);
                    rec->sense = PoSense::bec;
                    rec->spec = spec;
                    rec->rule = "prefix-hook";
                    rec->verdict = verdict_holds(PoStatus::NumericHolds, "prefix-hook");
                }
            }
        }
        return f;
    };

    std::vector<std::size_t> row_theorem(M, 0), row_combined(M, 0);
    std::vector<std::vector<PoPair>> row_pairs(collect_pairs ? M : 0);
    std::atomic<std::size_t> next_row{0};

    auto worker = [&]() {
        for (;;) {
            std::size_t i = next_row.fetch_add(1);
            if (i >= M) break;
            for (std::size_t j = i + 1; j < M; ++j) {
                PoPair rec;
                auto f = decide(i, j, collect_pairs ? &rec : nullptr);
                if (f.theorem) ++row_theorem[i];
                if (f.theorem || f.prefix) {
                    ++row_combined[i];
                    if (collect_pairs) row_pairs[i].push_back(std::move(rec));
                }
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < M; ++i) {
        res.theorem_count += row_theorem[i];
        res.combined_count += row_combined[i];
        if (collect_pairs)
            for (auto& pr : row_pairs[i]) res.pairs.push_back(std::move(pr));
    }
    return res;
}

}  // namespace polarpo
