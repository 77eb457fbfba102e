#include "polarpo/codec.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/beta.hpp>

#include "polarpo/bec.hpp"

namespace polarpo {

namespace {

unsigned log2_exact(std::size_t N) {
    if (N == 0 || (N & (N - 1)) != 0)
        throw std::invalid_argument("codec: length must be a power of two");
    unsigned n = 0;
    while ((std::size_t(1) << n) < N) ++n;
    return n;
}

std::size_t bit_reverse(std::size_t x, unsigned bits) {
    std::size_t r = 0;
    for (unsigned k = 0; k < bits; ++k)
        if (x & (std::size_t(1) << k)) r |= std::size_t(1) << (bits - 1 - k);
    return r;
}

}  // namespace

std::vector<std::uint8_t> bit_reversal_permute(const std::vector<std::uint8_t>& u) {
    unsigned n = log2_exact(u.size());
    std::vector<std::uint8_t> out(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) out[j] = u[bit_reverse(j, n)];
    return out;
}

std::vector<std::uint8_t> polar_transform(std::vector<std::uint8_t> v) {
    std::size_t N = v.size();
    log2_exact(N);
    for (std::size_t half = N / 2; half >= 1; half /= 2) {
        for (std::size_t base = 0; base < N; base += 2 * half)
            for (std::size_t i = base; i < base + half; ++i) v[i] ^= v[i + half];
        if (half == 1) break;
    }
    return v;
}

std::vector<std::uint8_t> encode(const std::vector<std::uint8_t>& v) {
    return polar_transform(v);
}

std::uint32_t crc_remainder(const std::vector<std::uint8_t>& bits, unsigned crc_length,
                            std::uint32_t polynomial) {
    if (crc_length == 0) return 0;
    std::uint32_t mask = (std::uint32_t(1) << crc_length) - 1;
    std::uint32_t reg = 0;
    for (std::uint8_t b : bits) {
        std::uint32_t fb = ((reg >> (crc_length - 1)) & 1u) ^ (b & 1u);
        reg = (reg << 1) & mask;
        if (fb) reg ^= polynomial & mask;
    }
    return reg;
}

std::vector<std::uint8_t> crc_append(std::vector<std::uint8_t> payload, unsigned crc_length,
                                     std::uint32_t polynomial) {
    std::uint32_t rem = crc_remainder(payload, crc_length, polynomial);
    for (unsigned k = crc_length; k-- > 0;)
        payload.push_back(std::uint8_t((rem >> k) & 1u));
    return payload;
}

bool crc_ok(const std::vector<std::uint8_t>& bits, unsigned crc_length,
            std::uint32_t polynomial) {
    if (bits.size() < crc_length) return false;
    std::vector<std::uint8_t> payload(bits.begin(), bits.end() - crc_length);
    std::uint32_t rem = crc_remainder(payload, crc_length, polynomial);
    for (unsigned k = 0; k < crc_length; ++k) {
        std::uint8_t expect = std::uint8_t((rem >> (crc_length - 1 - k)) & 1u);
        if (bits[bits.size() - crc_length + k] != expect) return false;
    }
    return true;
}

double certain_llr() { return std::numeric_limits<double>::infinity(); }

std::size_t CodeConfig::transmitted_length() const { return N - spec.pattern_count(N); }

double CodeConfig::code_rate() const {
    return double(K - crc_length) / double(transmitted_length());
}

void CodeConfig::validate() const {
    log2_exact(N);
    if (!spec.is_none() && N < (std::size_t(1) << spec.m))
        throw std::invalid_argument("config: N smaller than 2^m");
    if (info_set.size() != K) throw std::invalid_argument("config: |info_set| != K");
    if (K < crc_length) throw std::invalid_argument("config: K smaller than the CRC length");
    if (crc_length > 24) throw std::invalid_argument("config: CRC length above 24 unsupported");
    if (crc_length > 0 && crc_polynomial >> crc_length)
        throw std::invalid_argument("config: CRC polynomial wider than its length");
    std::vector<bool> dead(N, false);
    for (std::size_t p : degenerate_positions(spec, N)) dead[p - 1] = true;
    std::size_t prev = 0;
    for (std::size_t p : info_set) {
        if (p < 1 || p > N) throw std::invalid_argument("config: info position out of range");
        if (p <= prev) throw std::invalid_argument("config: info_set must be sorted and unique");
        if (dead[p - 1])
            throw std::invalid_argument("config: info position is rate-match degenerate");
        prev = p;
    }
    if (list_sizes.empty()) throw std::invalid_argument("config: no list sizes");
    for (unsigned L : list_sizes)
        if (L == 0 || (L & (L - 1)) != 0)
            throw std::invalid_argument("config: list sizes must be powers of two");
}

std::vector<double> transmit(const std::vector<std::uint8_t>& x, const RateMatchSpec& spec,
                             double sigma, std::mt19937_64& rng) {
    std::size_t N = x.size();
    log2_exact(N);
    if (!spec.is_none() && N < (std::size_t(1) << spec.m))
        throw std::invalid_argument("transmit: N smaller than 2^m");
    if (!(sigma >= 0.0)) throw std::invalid_argument("transmit: sigma must be nonnegative");
    std::size_t count = spec.pattern_count(N);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> llr(N);
    for (std::size_t i = 0; i < N; ++i) {
        bool punctured = spec.kind == RateMatchKind::puncture && i < count;
        bool shortened = spec.kind == RateMatchKind::shorten && i >= N - count;
        if (punctured) {
            llr[i] = 0.0;
        } else if (shortened) {
            if (x[i] != 0)
                throw std::invalid_argument("transmit: shortened code bit is not 0");
            llr[i] = certain_llr();
        } else {
            double s = x[i] ? -1.0 : 1.0;
            if (sigma == 0.0) {
                llr[i] = s * certain_llr();
            } else {
                double y = s + sigma * noise(rng);
                llr[i] = 2.0 * y / (sigma * sigma);
            }
        }
    }
    return llr;
}

// ---------------------------------------------------------------------------
// Decoders
// ---------------------------------------------------------------------------

namespace {

// log(1 + e^{-x}), safe at +-infinity.
double softplus_neg(double x) {
    if (std::isinf(x)) return x > 0 ? 0.0 : std::numeric_limits<double>::infinity();
    if (x >= 0.0) return std::log1p(std::exp(-x));
    return -x + std::log1p(std::exp(x));
}

// Check-node combination, exact tanh rule in the log domain.
double f_llr(double a, double b) {
    double sign = 1.0;
    if (a < 0.0) {
        sign = -sign;
        a = -a;
    }
    if (b < 0.0) {
        sign = -sign;
        b = -b;
    }
    double m = std::min(a, b);
    if (m == 0.0) return 0.0;
    if (std::isinf(m)) return sign * m;
    double s = a + b, d = std::abs(a - b);
    return sign * std::max(0.0, m + std::log1p(std::exp(-s)) - std::log1p(std::exp(-d)));
}

// Variable-node combination given the partial sum u of the first operand.
double g_llr(double a, double b, std::uint8_t u) {
    double t = u ? -a : a;
    if (std::isinf(t) && std::isinf(b) && (t > 0) != (b > 0))
        return 0.0;  // contradictory certainties; this path's metric is already infinite
    return t + b;
}

// Successive-cancellation list decoder with lazy-copied per-layer banks.
class ListDecoder {
public:
    ListDecoder(std::size_t N, unsigned L) : N_(N), n_(log2_exact(N)), L_(L) {
        P_.resize(n_ + 1);
        C_.resize(n_ + 1);
        path_bank_.assign(n_ + 1, std::vector<unsigned>(L_, 0));
        bank_ref_.resize(n_ + 1);
        free_banks_.resize(n_ + 1);
        for (unsigned lam = 0; lam <= n_; ++lam) {
            std::size_t size = layer_size(lam);
            P_[lam].assign(L_ * size, 0.0);
            C_[lam].assign(L_ * 2 * size, 0);
            bank_ref_[lam].assign(L_, 0);
        }
        active_.assign(L_, false);
        pm_.assign(L_, 0.0);
        head_.assign(L_, -1);
    }

    // llr is in position order; frozen[i] marks position i+1 frozen.
    // Returns surviving paths' (metric, decoded input bits) sorted by metric.
    std::vector<std::pair<double, std::vector<std::uint8_t>>> decode(
        const std::vector<double>& llr, const std::vector<std::uint8_t>& frozen) {
        reset(llr);
        for (std::size_t phi = 0; phi < N_; ++phi) {
            calc_p(n_, phi);
            if (frozen[phi])
                decide_frozen(phi);
            else
                fork_paths(phi);
            if (phi & 1) update_c(n_, phi);
        }
        std::vector<std::pair<double, std::vector<std::uint8_t>>> out;
        std::vector<unsigned> order;
        for (unsigned l = 0; l < L_; ++l)
            if (active_[l]) order.push_back(l);
        std::sort(order.begin(), order.end(), [&](unsigned a, unsigned b) {
            if (pm_[a] != pm_[b]) return pm_[a] < pm_[b];
            return a < b;
        });
        for (unsigned l : order) {
            std::vector<std::uint8_t> v(N_);
            int node = head_[l];
            for (std::size_t k = N_; k-- > 0;) {
                v[k] = arena_[std::size_t(node)].bit;
                node = arena_[std::size_t(node)].prev;
            }
            out.emplace_back(pm_[l], std::move(v));
        }
        return out;
    }

private:
    struct HistNode {
        std::uint8_t bit;
        int prev;
    };

    std::size_t N_;
    unsigned n_, L_;
    std::vector<std::vector<double>> P_;        // [layer][bank * size + beta]
    std::vector<std::vector<std::uint8_t>> C_;  // [layer][bank * 2*size + 2*beta + slot]
    std::vector<std::vector<unsigned>> path_bank_;
    std::vector<std::vector<unsigned>> bank_ref_;
    std::vector<std::vector<unsigned>> free_banks_;
    std::vector<bool> active_;
    std::vector<double> pm_;
    std::vector<int> head_;
    std::vector<unsigned> free_paths_;
    std::vector<HistNode> arena_;

    std::size_t layer_size(unsigned lam) const { return std::size_t(1) << (n_ - lam); }

    void reset(const std::vector<double>& llr) {
        for (unsigned lam = 0; lam <= n_; ++lam) {
            free_banks_[lam].clear();
            for (unsigned b = L_; b-- > 0;) free_banks_[lam].push_back(b);
            std::fill(bank_ref_[lam].begin(), bank_ref_[lam].end(), 0u);
        }
        free_paths_.clear();
        for (unsigned l = L_; l-- > 1;) {
            free_paths_.push_back(l);
            active_[l] = false;
        }
        active_[0] = true;
        pm_.assign(L_, 0.0);
        head_.assign(L_, -1);
        arena_.clear();
        for (unsigned lam = 0; lam <= n_; ++lam) {
            unsigned b = free_banks_[lam].back();
            free_banks_[lam].pop_back();
            path_bank_[lam][0] = b;
            bank_ref_[lam][b] = 1;
        }
        double* p0 = &P_[0][path_bank_[0][0] * N_];
        for (std::size_t j = 0; j < N_; ++j) p0[j] = llr[bit_reverse(j, n_)];
    }

    unsigned clone_path(unsigned src) {
        unsigned dst = free_paths_.back();
        free_paths_.pop_back();
        active_[dst] = true;
        pm_[dst] = pm_[src];
        head_[dst] = head_[src];
        for (unsigned lam = 0; lam <= n_; ++lam) {
            path_bank_[lam][dst] = path_bank_[lam][src];
            ++bank_ref_[lam][path_bank_[lam][dst]];
        }
        return dst;
    }

    void kill_path(unsigned l) {
        active_[l] = false;
        free_paths_.push_back(l);
        for (unsigned lam = 0; lam <= n_; ++lam) {
            unsigned b = path_bank_[lam][l];
            if (--bank_ref_[lam][b] == 0) free_banks_[lam].push_back(b);
        }
    }

    // Exclusive (copy-on-write) access to path l's bank at a layer.
    unsigned writable_bank(unsigned lam, unsigned l) {
        unsigned b = path_bank_[lam][l];
        if (bank_ref_[lam][b] == 1) return b;
        --bank_ref_[lam][b];
        unsigned nb = free_banks_[lam].back();
        free_banks_[lam].pop_back();
        std::size_t size = layer_size(lam);
        std::copy_n(P_[lam].begin() + b * size, size, P_[lam].begin() + nb * size);
        std::copy_n(C_[lam].begin() + b * 2 * size, 2 * size, C_[lam].begin() + nb * 2 * size);
        path_bank_[lam][l] = nb;
        bank_ref_[lam][nb] = 1;
        return nb;
    }

    double* p_of(unsigned lam, unsigned bank) { return &P_[lam][bank * layer_size(lam)]; }
    std::uint8_t* c_of(unsigned lam, unsigned bank) {
        return &C_[lam][bank * 2 * layer_size(lam)];
    }

    void calc_p(unsigned lam, std::size_t phi) {
        if (lam == 0) return;
        if ((phi & 1) == 0) calc_p(lam - 1, phi >> 1);
        std::size_t size = layer_size(lam);
        for (unsigned l = 0; l < L_; ++l) {
            if (!active_[l]) continue;
            unsigned ub = writable_bank(lam, l);
            double* pu = p_of(lam, ub);
            const std::uint8_t* cu = c_of(lam, ub);
            const double* pl = p_of(lam - 1, path_bank_[lam - 1][l]);
            if ((phi & 1) == 0) {
                for (std::size_t beta = 0; beta < size; ++beta)
                    pu[beta] = f_llr(pl[2 * beta], pl[2 * beta + 1]);
            } else {
                for (std::size_t beta = 0; beta < size; ++beta)
                    pu[beta] = g_llr(pl[2 * beta], pl[2 * beta + 1], cu[2 * beta]);
            }
        }
    }

    void update_c(unsigned lam, std::size_t phi) {
        if (lam <= 1) return;  // layer-0 partial sums are never read
        std::size_t psi = phi >> 1;
        std::size_t size = layer_size(lam);
        for (unsigned l = 0; l < L_; ++l) {
            if (!active_[l]) continue;
            const std::uint8_t* cu = c_of(lam, path_bank_[lam][l]);
            std::uint8_t* cl = c_of(lam - 1, writable_bank(lam - 1, l));
            for (std::size_t beta = 0; beta < size; ++beta) {
                cl[2 * (2 * beta) + (psi & 1)] = cu[2 * beta] ^ cu[2 * beta + 1];
                cl[2 * (2 * beta + 1) + (psi & 1)] = cu[2 * beta + 1];
            }
        }
        if (psi & 1) update_c(lam - 1, psi);
    }

    void set_bit(unsigned l, std::size_t phi, std::uint8_t u) {
        std::uint8_t* cn = c_of(n_, writable_bank(n_, l));
        cn[phi & 1] = u;
        arena_.push_back({u, head_[l]});
        head_[l] = int(arena_.size()) - 1;
    }

    void decide_frozen(std::size_t phi) {
        for (unsigned l = 0; l < L_; ++l) {
            if (!active_[l]) continue;
            double lam_llr = p_of(n_, path_bank_[n_][l])[0];
            pm_[l] += softplus_neg(lam_llr);
            set_bit(l, phi, 0);
        }
    }

    void fork_paths(std::size_t phi) {
        struct Cand {
            double pm;
            unsigned l;
            std::uint8_t u;
        };
        std::vector<Cand> cands;
        std::vector<unsigned> parents;
        for (unsigned l = 0; l < L_; ++l) {
            if (!active_[l]) continue;
            parents.push_back(l);
            double lam_llr = p_of(n_, path_bank_[n_][l])[0];
            cands.push_back({pm_[l] + softplus_neg(lam_llr), l, 0});
            cands.push_back({pm_[l] + softplus_neg(-lam_llr), l, 1});
        }
        std::vector<std::uint8_t> keep0(L_, 1), keep1(L_, 1);
        if (cands.size() > L_) {
            std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
                if (a.pm != b.pm) return a.pm < b.pm;
                if (a.l != b.l) return a.l < b.l;
                return a.u < b.u;
            });
            std::fill(keep0.begin(), keep0.end(), 0);
            std::fill(keep1.begin(), keep1.end(), 0);
            for (unsigned k = 0; k < L_; ++k)
                (cands[k].u ? keep1 : keep0)[cands[k].l] = 1;
        }
        std::vector<double> pm0(L_), pm1(L_);
        for (const Cand& c : cands)
            (c.u ? pm1 : pm0)[c.l] = c.pm;
        for (unsigned l : parents)
            if (!keep0[l] && !keep1[l]) kill_path(l);
        for (unsigned l : parents) {
            if (keep0[l] && keep1[l]) {
                unsigned l2 = clone_path(l);
                pm_[l] = pm0[l];
                set_bit(l, phi, 0);
                pm_[l2] = pm1[l];
                set_bit(l2, phi, 1);
            } else if (keep0[l]) {
                pm_[l] = pm0[l];
                set_bit(l, phi, 0);
            } else if (keep1[l]) {
                pm_[l] = pm1[l];
                set_bit(l, phi, 1);
            }
        }
    }
};

std::vector<std::uint8_t> frozen_mask(const CodeConfig& config) {
    std::vector<std::uint8_t> frozen(config.N, 1);
    for (std::size_t p : config.info_set) frozen[p - 1] = 0;
    return frozen;
}

}  // namespace

std::vector<std::uint8_t> sc_decode(const std::vector<double>& llr, const CodeConfig& config) {
    config.validate();
    if (llr.size() != config.N) throw std::invalid_argument("sc_decode: LLR length mismatch");
    std::vector<std::uint8_t> frozen = frozen_mask(config);
    std::vector<std::uint8_t> vhat(config.N, 0);
    std::size_t pos = 0;
    // Recursive successive cancellation; returns the re-encoding of the bits
    // it decided, used as partial sums by the sibling branch.
    std::function<std::vector<std::uint8_t>(std::vector<double>)> rec =
        [&](std::vector<double> a) -> std::vector<std::uint8_t> {
        std::size_t S = a.size();
        if (S == 1) {
            std::uint8_t bit = 0;
            if (!frozen[pos]) bit = a[0] < 0.0 ? 1 : 0;
            vhat[pos] = bit;
            ++pos;
            return {bit};
        }
        std::size_t half = S / 2;
        std::vector<double> up(half);
        for (std::size_t i = 0; i < half; ++i) up[i] = f_llr(a[i], a[i + half]);
        std::vector<std::uint8_t> ca = rec(std::move(up));
        std::vector<double> low(half);
        for (std::size_t i = 0; i < half; ++i) low[i] = g_llr(a[i], a[i + half], ca[i]);
        std::vector<std::uint8_t> cb = rec(std::move(low));
        std::vector<std::uint8_t> c(S);
        for (std::size_t i = 0; i < half; ++i) {
            c[i] = ca[i] ^ cb[i];
            c[i + half] = cb[i];
        }
        return c;
    };
    rec(llr);
    return vhat;
}

std::vector<std::uint8_t> scl_decode(const std::vector<double>& llr, const CodeConfig& config,
                                     unsigned L) {
    config.validate();
    if (llr.size() != config.N) throw std::invalid_argument("scl_decode: LLR length mismatch");
    if (L == 0 || (L & (L - 1)) != 0)
        throw std::invalid_argument("scl_decode: L must be a power of two");
    ListDecoder dec(config.N, L);
    auto paths = dec.decode(llr, frozen_mask(config));
    if (config.crc_length > 0) {
        for (const auto& [metric, v] : paths) {
            std::vector<std::uint8_t> info;
            info.reserve(config.K);
            for (std::size_t p : config.info_set) info.push_back(v[p - 1]);
            if (crc_ok(info, config.crc_length, config.crc_polynomial)) return v;
        }
    }
    return paths.front().second;
}

// ---------------------------------------------------------------------------
// FER experiment
// ---------------------------------------------------------------------------

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t point, std::uint64_t trial) {
    return splitmix64(splitmix64(splitmix64(seed) ^ point) ^ trial);
}

bool run_trial(const CodeConfig& config, unsigned L, double sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::size_t payload_len = config.K - config.crc_length;
    std::vector<std::uint8_t> payload(payload_len);
    for (std::uint8_t& b : payload) b = std::uint8_t(rng() & 1u);
    std::vector<std::uint8_t> data =
        config.crc_length > 0
            ? crc_append(payload, config.crc_length, config.crc_polynomial)
            : payload;
    std::vector<std::uint8_t> v(config.N, 0);
    for (std::size_t k = 0; k < config.info_set.size(); ++k)
        v[config.info_set[k] - 1] = data[k];
    std::vector<std::uint8_t> x = encode(v);
    std::vector<double> llr = transmit(x, config.spec, sigma, rng);
    std::vector<std::uint8_t> vhat = scl_decode(llr, config, L);
    for (std::size_t p : config.info_set)
        if (vhat[p - 1] != v[p - 1]) return true;
    return false;
}

void clopper_pearson(std::size_t k, std::size_t n, double& lo, double& hi) {
    const double alpha = 0.05;
    lo = 0.0;
    hi = 1.0;
    if (n == 0) return;
    if (k > 0) {
        boost::math::beta_distribution<double> dl(double(k), double(n - k + 1));
        lo = boost::math::quantile(dl, alpha / 2.0);
    }
    if (k < n) {
        boost::math::beta_distribution<double> dh(double(k + 1), double(n - k));
        hi = boost::math::quantile(dh, 1.0 - alpha / 2.0);
    }
}

}  // namespace

std::vector<FerPoint> fer_experiment(const CodeConfig& config,
                                     const std::vector<double>& ebn0_db_grid,
                                     const FerOptions& options) {
    config.validate();
    if (config.K <= config.crc_length)
        throw std::invalid_argument("fer_experiment: no payload bits");
    if (options.round_size == 0) throw std::invalid_argument("fer_experiment: round size 0");
    double rate = config.code_rate();

    std::vector<FerPoint> points;
    std::uint64_t point_key = 0;
    for (double snr_db : ebn0_db_grid) {
        for (unsigned L : config.list_sizes) {
            ++point_key;
            double sigma = std::sqrt(1.0 / (2.0 * rate * std::pow(10.0, snr_db / 10.0)));
            FerPoint pt;
            pt.snr_db = snr_db;
            pt.L = L;
            while (pt.trials < options.max_trials &&
                   pt.frame_errors < options.target_errors) {
                std::size_t round =
                    std::min(options.round_size, options.max_trials - pt.trials);
                std::size_t first = pt.trials;
                unsigned workers = std::max(1u, options.threads);
                std::vector<std::size_t> errs(workers, 0);
                auto work = [&](unsigned w) {
                    for (std::size_t t = first + w; t < first + round; t += workers)
                        if (run_trial(config, L, sigma,
                                      trial_seed(options.seed, point_key, t)))
                            ++errs[w];
                };
                if (workers == 1) {
                    work(0);
                } else {
                    std::vector<std::thread> pool;
                    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
                    for (auto& th : pool) th.join();
                }
                for (std::size_t e : errs) pt.frame_errors += e;
                pt.trials += round;
            }
            pt.fer = pt.trials ? double(pt.frame_errors) / double(pt.trials) : 0.0;
            clopper_pearson(pt.frame_errors, pt.trials, pt.ci_lo, pt.ci_hi);
            points.push_back(pt);
        }
    }
    return points;
}

}  // namespace polarpo
