// polar-po: command-line front end for the rate-matched polar-code PO library.
//
// Subcommands: evolve, check-po, enumerate, verify, construct, simulate,
// convmap.  Every run writes its results (JSON or CSV) plus a manifest that
// records the command, the fully resolved parameter set, and SHA-256 digests
// of all outputs.  Exit codes: 0 success, 2 argument/validation error,
// 1 internal failure.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polarpo/bec.hpp"
#include "polarpo/bmsc.hpp"
#include "polarpo/codec.hpp"
#include "polarpo/construction.hpp"
#include "polarpo/convolution.hpp"
#include "polarpo/paths.hpp"
#include "polarpo/po.hpp"
#include "polarpo/poly.hpp"
#include "polarpo/rate_match.hpp"
#include "polarpo/theory.hpp"

using json = nlohmann::ordered_json;
using namespace polarpo;

namespace {

constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// SHA-256 (FIPS 180-4) for manifest digests.
// ---------------------------------------------------------------------------

class Sha256 {
public:
    Sha256() { reset(); }

    void update(const void* data, std::size_t len) {
        const std::uint8_t* p = static_cast<const std::uint8_t*>(data);
        total_ += len;
        while (len > 0) {
            std::size_t take = std::min(len, std::size_t(64) - fill_);
            std::memcpy(buf_ + fill_, p, take);
            fill_ += take;
            p += take;
            len -= take;
            if (fill_ == 64) {
                compress(buf_);
                fill_ = 0;
            }
        }
    }

    std::string hex_digest() {
        std::uint64_t bits = total_ * 8;
        std::uint8_t pad = 0x80;
        update(&pad, 1);
        std::uint8_t zero = 0;
        while (fill_ != 56) update(&zero, 1);
        std::uint8_t lenb[8];
        for (int i = 0; i < 8; ++i) lenb[i] = std::uint8_t(bits >> (56 - 8 * i));
        total_ -= fill_ + 8;  // length padding is not message data
        std::memcpy(buf_ + fill_, lenb, 8);
        compress(buf_);
        static const char* hexd = "0123456789abcdef";
        std::string out;
        for (int i = 0; i < 8; ++i)
            for (int b = 28; b >= 0; b -= 4) out.push_back(hexd[(h_[i] >> b) & 0xF]);
        return out;
    }

private:
    std::uint32_t h_[8];
    std::uint8_t buf_[64];
    std::size_t fill_ = 0;
    std::uint64_t total_ = 0;

    void reset() {
        static const std::uint32_t init[8] = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                              0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
        std::memcpy(h_, init, sizeof(h_));
        fill_ = 0;
        total_ = 0;
    }

    static std::uint32_t rotr(std::uint32_t x, unsigned r) { return (x >> r) | (x << (32 - r)); }

    void compress(const std::uint8_t* p) {
        static const std::uint32_t k[64] = {
            0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
            0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
            0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
            0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
            0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
            0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
            0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
            0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
            0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
            0xc67178f2};
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        std::uint32_t a = h_[0], b = h_[1], c = h_[2], d = h_[3];
        std::uint32_t e = h_[4], f = h_[5], g = h_[6], h = h_[7];
        for (int i = 0; i < 64; ++i) {
            std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            std::uint32_t ch = (e & f) ^ (~e & g);
            std::uint32_t t1 = h + s1 + ch + k[i] + w[i];
            std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            std::uint32_t t2 = s0 + maj;
            h = g;
            g = f;
            f = e;
            e = d + t1;
            d = c;
            c = b;
            b = a;
            a = t1 + t2;
        }
        h_[0] += a;
        h_[1] += b;
        h_[2] += c;
        h_[3] += d;
        h_[4] += e;
        h_[5] += f;
        h_[6] += g;
        h_[7] += h;
    }
};

std::string sha256_hex(const std::string& data) {
    Sha256 s;
    s.update(data.data(), data.size());
    return s.hex_digest();
}

// ---------------------------------------------------------------------------
// Run manifest plumbing.
// ---------------------------------------------------------------------------

std::string iso_utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct RunContext {
    std::string command;
    json params = json::object();
    std::optional<std::uint64_t> seed;
    std::string manifest_path;  // --manifest override
    std::string started = iso_utc_now();
    std::vector<std::pair<std::string, std::string>> outputs;
    std::string first_file;

    // Writes content to out_path ("" = stdout) and records its digest.
    void emit(const std::string& out_path, const std::string& content) {
        std::string digest = sha256_hex(content);
        if (out_path.empty()) {
            std::cout << content;
            outputs.emplace_back("-", digest);
        } else {
            std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
            if (!f) throw std::runtime_error("cannot open output file '" + out_path + "'");
            f << content;
            f.flush();
            if (!f) throw std::runtime_error("failed writing output file '" + out_path + "'");
            outputs.emplace_back(out_path, digest);
            if (first_file.empty()) first_file = out_path;
        }
    }

    // Emits the manifest: to --manifest, else next to the first output file,
    // else to stderr so stdout stays machine-readable.
    void finish() {
        json m;
        m["command"] = command;
        m["version"] = kVersion;
        m["parameters"] = params;
        if (seed) m["seed"] = *seed;
        m["started_at"] = started;
        m["finished_at"] = iso_utc_now();
        json outs = json::array();
        for (const auto& [file, digest] : outputs)
            outs.push_back(json{{"file", file}, {"sha256", digest}});
        m["outputs"] = outs;
        std::string text = m.dump(2);
        text.push_back('\n');
        std::string path = manifest_path;
        if (path.empty() && !first_file.empty()) path = first_file + ".manifest.json";
        if (path.empty()) {
            std::cerr << text;
        } else {
            std::ofstream f(path, std::ios::binary | std::ios::trunc);
            if (!f) throw std::runtime_error("cannot open manifest file '" + path + "'");
            f << text;
        }
    }
};

unsigned resolve_threads(unsigned flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("POLAR_PO_THREADS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && v > 0 && v < 1024) return unsigned(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

std::string format_double(double v, const char* fmt = "%.10g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

std::vector<double> parse_snr_grid(const std::string& s) {
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        double start = 0, step = 0, stop = 0;
        char extra = 0;
        if (std::sscanf(s.c_str(), "%lf:%lf:%lf%c", &start, &step, &stop, &extra) != 3 ||
            step <= 0.0)
            throw std::invalid_argument("bad --snr range '" + s + "' (want start:step:stop)");
        for (double v = start; v <= stop + 1e-9; v += step) out.push_back(v);
    } else {
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            std::size_t used = 0;
            double v = std::stod(tok, &used);
            if (used != tok.size())
                throw std::invalid_argument("bad --snr value '" + tok + "'");
            out.push_back(v);
        }
    }
    if (out.empty()) throw std::invalid_argument("--snr produced an empty grid");
    return out;
}

json verdict_json(const PoVerdict& v) {
    json j;
    j["status"] = to_string(v.status);
    j["evidence"] = v.evidence;
    if (v.has_witness) {
        j["witness"] = json{{"x", v.witness_x},
                            {"z_lesser", v.witness_z_lesser},
                            {"z_greater", v.witness_z_greater}};
    }
    return j;
}

json pair_json(const PoPair& p) {
    json j;
    j["a"] = p.lesser;
    j["b"] = p.greater;
    j["sense"] = p.sense == PoSense::bec ? "bec" : "bmsc";
    j["rule"] = p.rule;
    j["status"] = to_string(p.verdict.status);
    return j;
}

// ---------------------------------------------------------------------------
// Subcommand bodies.
// ---------------------------------------------------------------------------

struct EvolveArgs {
    std::string spec = "none";
    std::string path;
    std::string backend = "double";
    std::vector<double> xs;
    std::size_t grid = 0;
    std::string out, manifest;
};

int run_evolve(const EvolveArgs& a) {
    RateMatchSpec spec = RateMatchSpec::parse(a.spec);
    check_path(a.path);
    RunContext ctx;
    ctx.command = "evolve";
    ctx.manifest_path = a.manifest;

    std::vector<double> xs = a.xs;
    if (a.grid > 0) {
        if (!xs.empty())
            throw std::invalid_argument("--x and --grid are mutually exclusive");
        xs = chebyshev_grid(a.grid);
    } else if (xs.empty()) {
        xs = {0.5};
    }
    for (double x : xs)
        if (!(x >= 0.0 && x <= 1.0))
            throw std::invalid_argument("--x values must lie in [0,1]");

    ctx.params = json{{"spec", spec.to_string()},
                      {"path", a.path},
                      {"backend", a.backend},
                      {"grid", a.grid},
                      {"x", xs}};

    json result;
    result["path"] = a.path;
    result["spec"] = spec.to_string();
    result["backend"] = a.backend;
    if (a.backend == "double") {
        json values = json::array();
        for (double x : xs)
            values.push_back(json{{"x", x}, {"z", path_bhattacharyya(spec, a.path, x)}});
        result["values"] = values;
    } else if (a.backend == "log") {
        json values = json::array();
        for (double x : xs) {
            LogVal z = path_bhattacharyya_log(spec, a.path, logval_from_x(x));
            values.push_back(json{{"x", x}, {"log_z", z.lz}, {"log_1mz", z.l1m}});
        }
        result["values"] = values;
    } else if (a.backend == "poly") {
        BigPoly p = path_polynomial(spec, a.path);
        json coeffs = json::array();
        for (const auto& c : p.coefficients()) coeffs.push_back(c.str());
        result["degree"] = p.degree();
        result["coefficients"] = coeffs;  // constant term first
    } else {
        throw std::invalid_argument("unknown backend '" + a.backend + "'");
    }
    ctx.emit(a.out, result.dump(2) + "\n");
    ctx.finish();
    return 0;
}

struct CheckPoArgs {
    std::string spec;
    std::string a, b;
    std::string sense = "bec";
    std::size_t grid = 0;
    double tol = -1.0;
    std::string out, manifest;
};

int run_check_po(const CheckPoArgs& a) {
    RateMatchSpec spec = RateMatchSpec::parse(a.spec);
    check_path(a.a);
    check_path(a.b);
    DominanceConfig cfg;
    if (a.grid > 0) cfg.grid_points = a.grid;
    if (a.tol > 0) cfg.tolerance = a.tol;

    RunContext ctx;
    ctx.command = "check-po";
    ctx.manifest_path = a.manifest;
    ctx.params = json{{"spec", spec.to_string()}, {"a", a.a},
                      {"b", a.b},                 {"sense", a.sense},
                      {"grid", cfg.grid_points},  {"tolerance", cfg.tolerance}};

    json result;
    result["spec"] = spec.to_string();
    result["a"] = a.a;
    result["b"] = a.b;
    result["sense"] = a.sense;
    if (a.sense == "bec") {
        PoVerdict v = dominates(spec, a.a, a.b, cfg);
        result.update(verdict_json(v));
    } else if (a.sense == "bmsc") {
        // Conclusion a ⪯ b for a general BMSC.  Routes, narrowest first: the
        // transfer theorem when a ends in '1' and b starts with '1'; the
        // corollary with the padded premise; finally the transfer bound,
        // which subsumes both and whose verdict is reported when nothing
        // holds.
        std::optional<PoPair> chosen;
        if (a.a.size() > spec.m && a.b.size() > spec.m && a.a.size() > 1 && a.b.size() > 1 &&
            a.a.back() == '1' && a.b.front() == '1') {
            PoPair thm = bmsc_transfer(spec, a.a.substr(0, a.a.size() - 1), a.b.substr(1), cfg);
            if (thm.verdict.holds()) chosen = thm;
        }
        if (!chosen) {
            PoPair cor = bmsc_transfer_corollary(spec, a.a, a.b, cfg);
            if (cor.verdict.holds()) chosen = cor;
        }
        if (!chosen) chosen = bmsc_transfer_bound(spec, a.a, a.b, cfg);
        result["rule"] = chosen->rule;
        result.update(verdict_json(chosen->verdict));
    } else {
        throw std::invalid_argument("unknown sense '" + a.sense + "' (want bec or bmsc)");
    }
    ctx.emit(a.out, result.dump(2) + "\n");
    ctx.finish();
    return 0;
}

struct EnumerateArgs {
    std::string spec;
    std::size_t N = 0;
    bool collect_pairs = false;
    bool theorem_only = false;
    std::size_t grid = 0;
    double tol = -1.0;
    unsigned threads = 0;
    std::string out, manifest;
};

int run_enumerate(const EnumerateArgs& a) {
    RateMatchSpec spec = RateMatchSpec::parse(a.spec);
    DominanceConfig cfg;
    if (a.grid > 0) cfg.transfer_grid_points = a.grid;
    if (a.tol >= 0) cfg.transfer_tolerance = a.tol;
    unsigned threads = resolve_threads(a.threads);

    RunContext ctx;
    ctx.command = "enumerate";
    ctx.manifest_path = a.manifest;
    ctx.params = json{{"spec", spec.to_string()},
                      {"N", a.N},
                      {"pairs", a.collect_pairs},
                      {"theorem_only", a.theorem_only},
                      {"grid", cfg.transfer_grid_points},
                      {"tolerance", cfg.transfer_tolerance},
                      {"threads", threads}};

    MotherPoHook hook;  // empty = built-in traditional-PO hook
    if (a.theorem_only)
        hook = [](const std::string&, const std::string&) { return false; };
    EnumerateResult res = enumerate_pairs(spec, a.N, cfg, hook, threads, a.collect_pairs);

    json result;
    result["spec"] = spec.to_string();
    result["N"] = a.N;
    result["candidates"] = res.candidates;
    result["theorem_count"] = res.theorem_count;
    result["combined_count"] = res.combined_count;
    result["builtin_hook"] = res.builtin_hook;
    result["certification"] = res.certification;
    if (a.collect_pairs) {
        json pairs = json::array();
        for (const PoPair& p : res.pairs) pairs.push_back(pair_json(p));
        result["pairs"] = pairs;
    }
    ctx.emit(a.out, result.dump(2) + "\n");
    ctx.finish();
    return 0;
}

struct VerifyArgs {
    std::string suite = "all";
    std::size_t n_max = 64;
    std::size_t draws = 10000;
    std::uint64_t seed = 12345;
    unsigned m_min = 2;
    unsigned m_max = 4;
    std::size_t grid = 2049;
    double tol = 1e-12;
    std::string out, manifest;
};

int run_verify(const VerifyArgs& a) {
    if (a.suite != "all" && a.suite != "geomean" && a.suite != "squaring")
        throw std::invalid_argument("unknown suite '" + a.suite +
                                    "' (want geomean, squaring, or all)");
    SweepLimits limits;
    limits.chain_n_max = a.n_max;
    limits.chain_draws = a.draws;
    limits.seed = a.seed;
    limits.squaring_m_min = a.m_min;
    limits.squaring_m_max = a.m_max;
    limits.grid_points = a.grid;

    RunContext ctx;
    ctx.command = "verify";
    ctx.manifest_path = a.manifest;
    ctx.seed = a.seed;
    ctx.params = json{{"suite", a.suite}, {"n_max", a.n_max},   {"draws", a.draws},
                      {"seed", a.seed},   {"m_min", a.m_min},   {"m_max", a.m_max},
                      {"grid", a.grid},   {"tolerance", a.tol}};

    auto report_json = [](const char* name, const SweepReport& r) {
        json failures = json::array();
        for (const SweepFailure& f : r.failures)
            failures.push_back(json{{"suite", f.suite},
                                    {"detail", f.detail},
                                    {"violation", f.violation}});
        return json{{"suite", name},
                    {"tuples", r.tuples},
                    {"max_violation", r.max_violation},
                    {"failures", failures}};
    };

    json suites = json::array();
    bool ok = true;
    if (a.suite == "all" || a.suite == "geomean") {
        SweepReport r = sweep_geometric_mean(limits, a.tol);
        ok = ok && r.failures.empty();
        suites.push_back(report_json("geomean", r));
    }
    if (a.suite == "all" || a.suite == "squaring") {
        SweepReport r = sweep_squaring(limits, a.tol);
        ok = ok && r.failures.empty();
        suites.push_back(report_json("squaring", r));
    }
    json result;
    result["suites"] = suites;
    result["ok"] = ok;
    ctx.emit(a.out, result.dump(2) + "\n");
    ctx.finish();
    return ok ? 0 : 1;
}

struct ConstructArgs {
    std::string method;
    std::string spec = "none";
    std::size_t N = 0;
    std::size_t K = 0;
    double snr_db = 2.2;
    unsigned threads = 0;
    std::string out, scores, manifest;
};

int run_construct(const ConstructArgs& a) {
    RateMatchSpec spec = RateMatchSpec::parse(a.spec);
    if (a.method != "ga" && a.method != "pw" && a.method != "improved")
        throw std::invalid_argument("unknown method '" + a.method +
                                    "' (want ga, pw, or improved)");
    unsigned threads = resolve_threads(a.threads);

    RunContext ctx;
    ctx.command = "construct";
    ctx.manifest_path = a.manifest;
    ctx.params = json{{"method", a.method}, {"spec", spec.to_string()}, {"N", a.N},
                      {"K", a.K},           {"snr_db", a.snr_db},       {"threads", threads}};

    ReliabilityOrder order =
        a.method == "pw" ? pw_sequence(a.N) : ga_reliabilities(spec, a.N, a.snr_db);
    std::vector<std::size_t> info;
    std::size_t changed = 0;
    if (a.method == "improved") {
        std::vector<std::size_t> base = select_info_set(order, a.K, spec, a.N);
        EnumerateResult pos =
            enumerate_pairs(spec, a.N, DominanceConfig::defaults(), {}, threads, true);
        info = improve_with_pos(order, pos.pairs, a.K, spec);
        std::vector<std::size_t> diff;
        std::set_difference(info.begin(), info.end(), base.begin(), base.end(),
                            std::back_inserter(diff));
        changed = diff.size();
    } else {
        info = select_info_set(order, a.K, spec, a.N);
    }

    json result;
    result["method"] = a.method;
    result["spec"] = spec.to_string();
    result["N"] = a.N;
    result["K"] = a.K;
    if (a.method != "pw") result["design_snr_db"] = a.snr_db;
    result["provenance"] = order.provenance;
    if (a.method == "improved") result["changed_positions"] = changed;
    result["info_set"] = info;
    ctx.emit(a.out, result.dump(2) + "\n");

    if (!a.scores.empty()) {
        std::string csv = "position,score\n";
        for (std::size_t i = 0; i < order.scores.size(); ++i)
            csv += std::to_string(i + 1) + "," + format_double(order.scores[i]) + "\n";
        ctx.emit(a.scores, csv);
    }
    ctx.finish();
    return 0;
}

struct SimulateArgs {
    std::string config;
    std::string snr;
    std::string list;
    std::uint64_t seed = 1;
    std::size_t max_trials = 2000000;
    std::size_t target_errors = 100;
    std::size_t round = 256;
    unsigned threads = 0;
    std::string out, manifest;
};

std::uint32_t parse_crc_polynomial(const json& v) {
    if (v.is_number_unsigned()) return v.get<std::uint32_t>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        int base = s.rfind("0x", 0) == 0 || s.rfind("0X", 0) == 0 ? 16 : 10;
        return std::uint32_t(std::stoul(base == 16 ? s.substr(2) : s, nullptr, base));
    }
    throw std::invalid_argument("crc_polynomial must be an integer or a hex string");
}

int run_simulate(const SimulateArgs& a) {
    std::ifstream cf(a.config);
    if (!cf) throw std::invalid_argument("cannot open config file '" + a.config + "'");
    json j = json::parse(cf);

    CodeConfig cc;
    cc.N = j.at("N").get<std::size_t>();
    cc.K = j.at("K").get<std::size_t>();
    cc.spec = RateMatchSpec::parse(j.value("spec", std::string("none")));
    cc.crc_length = j.value("crc_length", 12u);
    if (j.contains("crc_polynomial")) cc.crc_polynomial = parse_crc_polynomial(j["crc_polynomial"]);
    if (j.contains("list_sizes")) cc.list_sizes = j["list_sizes"].get<std::vector<unsigned>>();

    unsigned threads = resolve_threads(a.threads);
    std::string method = "explicit";
    double design_snr = j.value("design_snr_db", 2.2);
    if (j.contains("info_set")) {
        cc.info_set = j["info_set"].get<std::vector<std::size_t>>();
    } else {
        method = j.value("method", std::string());
        if (method != "ga" && method != "pw" && method != "improved")
            throw std::invalid_argument(
                "config needs either info_set or method: ga|pw|improved");
        ReliabilityOrder order = method == "pw" ? pw_sequence(cc.N)
                                                : ga_reliabilities(cc.spec, cc.N, design_snr);
        if (method == "improved") {
            EnumerateResult pos =
                enumerate_pairs(cc.spec, cc.N, DominanceConfig::defaults(), {}, threads, true);
            cc.info_set = improve_with_pos(order, pos.pairs, cc.K, cc.spec);
        } else {
            cc.info_set = select_info_set(order, cc.K, cc.spec, cc.N);
        }
    }
    if (!a.list.empty()) {
        cc.list_sizes.clear();
        std::stringstream ss(a.list);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) cc.list_sizes.push_back(unsigned(std::stoul(tok)));
    }
    cc.validate();
    std::vector<double> grid = parse_snr_grid(a.snr);

    FerOptions opt;
    opt.max_trials = a.max_trials;
    opt.target_errors = a.target_errors;
    opt.seed = a.seed;
    opt.threads = threads;
    opt.round_size = a.round;

    RunContext ctx;
    ctx.command = "simulate";
    ctx.manifest_path = a.manifest;
    ctx.seed = a.seed;
    ctx.params = json{{"config_file", a.config},
                      {"N", cc.N},
                      {"K", cc.K},
                      {"spec", cc.spec.to_string()},
                      {"crc_length", cc.crc_length},
                      {"crc_polynomial", cc.crc_polynomial},
                      {"info_source", method},
                      {"design_snr_db", design_snr},
                      {"info_set", cc.info_set},
                      {"list_sizes", cc.list_sizes},
                      {"snr_db", grid},
                      {"seed", a.seed},
                      {"max_trials", a.max_trials},
                      {"target_errors", a.target_errors},
                      {"round_size", a.round},
                      {"threads", threads}};

    std::vector<FerPoint> points = fer_experiment(cc, grid, opt);
    std::string csv = "snr_db,L,trials,errors,fer,ci_lo,ci_hi\n";
    for (const FerPoint& p : points) {
        csv += format_double(p.snr_db) + "," + std::to_string(p.L) + "," +
               std::to_string(p.trials) + "," + std::to_string(p.frame_errors) + "," +
               format_double(p.fer) + "," + format_double(p.ci_lo) + "," +
               format_double(p.ci_hi) + "\n";
    }
    ctx.emit(a.out, csv);
    ctx.finish();
    return 0;
}

struct ConvmapArgs {
    std::size_t K = 0;
    std::string out, manifest;
};

int run_convmap(const ConvmapArgs& a) {
    ConvMapping map = build_convolution_mapping(a.K);
    RunContext ctx;
    ctx.command = "convmap";
    ctx.manifest_path = a.manifest;
    ctx.params = json{{"K", a.K}};
    json result = json::object();
    for (std::size_t x = 1; x <= map.K; ++x) result[std::to_string(x)] = map.to[x];
    ctx.emit(a.out, result.dump(2) + "\n");
    ctx.finish();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rate-matched polar-code Bhattacharyya evolution, partial orders, "
                 "constructions, and SC/SCL simulation"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::function<int()> action;

    auto add_out = [](CLI::App* cmd, std::string& out, std::string& manifest) {
        cmd->add_option("--out", out, "Result file (default: stdout)");
        cmd->add_option("--manifest", manifest,
                        "Manifest file (default: <out>.manifest.json, or stderr)");
    };

    // evolve ------------------------------------------------------------
    auto ev = std::make_shared<EvolveArgs>();
    {
        CLI::App* c = app.add_subcommand(
            "evolve", "Evaluate a path's Bhattacharyya function Z_path(x)");
        c->add_option("--spec", ev->spec, "Rate-match spec: none, punc:P/2^m, short:S/2^m")
            ->capture_default_str();
        c->add_option("--path", ev->path, "Path over {0,1}, first step first")->required();
        c->add_option("--backend", ev->backend, "double | log | poly")->capture_default_str();
        c->add_option("--x", ev->xs, "Evaluation points in [0,1] (repeatable)");
        c->add_option("--grid", ev->grid, "Evaluate on a Chebyshev grid of this many points");
        add_out(c, ev->out, ev->manifest);
        c->callback([&action, ev] { action = [ev] { return run_evolve(*ev); }; });
    }

    // check-po ------------------------------------------------------------
    auto cp = std::make_shared<CheckPoArgs>();
    {
        CLI::App* c = app.add_subcommand("check-po",
                                         "Decide whether path a precedes path b (Z_b <= Z_a)");
        c->add_option("--spec", cp->spec, "Rate-match spec")->required();
        c->add_option("--a", cp->a, "Lesser path")->required();
        c->add_option("--b", cp->b, "Greater path")->required();
        c->add_option("--sense", cp->sense, "bec | bmsc")->capture_default_str();
        c->add_option("--grid", cp->grid, "Override grid points");
        c->add_option("--tol", cp->tol, "Override violation tolerance");
        add_out(c, cp->out, cp->manifest);
        c->callback([&action, cp] { action = [cp] { return run_check_po(*cp); }; });
    }

    // enumerate ------------------------------------------------------------
    auto en = std::make_shared<EnumerateArgs>();
    {
        CLI::App* c = app.add_subcommand(
            "enumerate", "Count (and list) ordered pairs among all non-degenerate positions");
        c->add_option("--spec", en->spec, "Rate-match spec")->required();
        c->add_option("--N", en->N, "Code length (power of two)")->required();
        c->add_flag("--pairs", en->collect_pairs, "Include the pair records in the output");
        c->add_flag("--theorem-only", en->theorem_only,
                    "Disable the prefix hook; count only transfer-bound pairs");
        c->add_option("--grid", en->grid, "Transfer-bound grid points (uniform; default 305)");
        c->add_option("--tol", en->tol, "Transfer-bound comparison slack (default 0, exact)");
        c->add_option("--threads", en->threads,
                      "Worker threads (default: POLAR_PO_THREADS or logical cores)");
        add_out(c, en->out, en->manifest);
        c->callback([&action, en] { action = [en] { return run_enumerate(*en); }; });
    }

    // verify ------------------------------------------------------------
    auto vf = std::make_shared<VerifyArgs>();
    {
        CLI::App* c = app.add_subcommand(
            "verify", "Run the analytical sweep suites (geomean, squaring)");
        c->add_option("--suite", vf->suite, "geomean | squaring | all")->capture_default_str();
        c->add_option("--n-max", vf->n_max, "Largest code length in the geomean suite")
            ->capture_default_str();
        c->add_option("--draws", vf->draws, "Total random (a,b) draws")->capture_default_str();
        c->add_option("--seed", vf->seed, "RNG seed")->capture_default_str();
        c->add_option("--m-min", vf->m_min, "Smallest m in the squaring suite")
            ->capture_default_str();
        c->add_option("--m-max", vf->m_max, "Largest m in the squaring suite")
            ->capture_default_str();
        c->add_option("--grid", vf->grid, "Grid points for the squaring suite")
            ->capture_default_str();
        c->add_option("--tol", vf->tol, "Violation tolerance")->capture_default_str();
        add_out(c, vf->out, vf->manifest);
        c->callback([&action, vf] { action = [vf] { return run_verify(*vf); }; });
    }

    // construct ------------------------------------------------------------
    auto cs = std::make_shared<ConstructArgs>();
    {
        CLI::App* c = app.add_subcommand("construct", "Build an information set");
        c->add_option("--method", cs->method, "ga | pw | improved")->required();
        c->add_option("--spec", cs->spec, "Rate-match spec")->capture_default_str();
        c->add_option("--N", cs->N, "Code length (power of two)")->required();
        c->add_option("--K", cs->K, "Information positions (CRC included)")->required();
        c->add_option("--snr", cs->snr_db, "Design Eb/N0 in dB (ga, improved)")
            ->capture_default_str();
        c->add_option("--threads", cs->threads,
                      "Worker threads for the pair enumeration (improved)");
        c->add_option("--scores", cs->scores, "Also write the full score vector as CSV here");
        add_out(c, cs->out, cs->manifest);
        c->callback([&action, cs] { action = [cs] { return run_construct(*cs); }; });
    }

    // simulate ------------------------------------------------------------
    auto sm = std::make_shared<SimulateArgs>();
    {
        CLI::App* c = app.add_subcommand("simulate", "FER experiment over an Eb/N0 grid");
        c->add_option("--config", sm->config, "Code config JSON file")->required();
        c->add_option("--snr", sm->snr, "Eb/N0 grid: start:step:stop or comma list")
            ->required();
        c->add_option("--list", sm->list, "Comma list of SCL list sizes (overrides config)");
        c->add_option("--seed", sm->seed, "RNG seed")->capture_default_str();
        c->add_option("--max-trials", sm->max_trials, "Trial cap per point")
            ->capture_default_str();
        c->add_option("--target-errors", sm->target_errors, "Stop after this many frame errors")
            ->capture_default_str();
        c->add_option("--round", sm->round, "Stopping-rule round size")->capture_default_str();
        c->add_option("--threads", sm->threads,
                      "Worker threads (default: POLAR_PO_THREADS or logical cores)");
        add_out(c, sm->out, sm->manifest);
        c->callback([&action, sm] { action = [sm] { return run_simulate(*sm); }; });
    }

    // convmap ------------------------------------------------------------
    auto cm = std::make_shared<ConvmapArgs>();
    {
        CLI::App* c = app.add_subcommand(
            "convmap", "Bijection {1..K} -> {K+1..2K} with every pair convolving");
        c->add_option("--K", cm->K, "Number of positions to pair")->required();
        add_out(c, cm->out, cm->manifest);
        c->callback([&action, cm] { action = [cm] { return run_convmap(*cm); }; });
    }

    try {
        app.parse(argc, argv);
        return action ? action() : 2;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
