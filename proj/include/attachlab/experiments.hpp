// Reproducible Monte Carlo harness: sweeps (model, m, n, property) grids,
// aggregates success frequencies with Wilson intervals, and persists results
// as append-only JSON lines plus a manifest, so interrupted sweeps resume
// without recomputing or rewriting finished trials.
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "core.hpp"
#include "generate.hpp"
#include "hamilton.hpp"
#include "lowerbound.hpp"
#include "matching.hpp"

namespace attachlab {

// ---- hashing and seed derivation ------------------------------------------

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 15];
    return s;
}

// ---- Wilson score interval -------------------------------------------------

struct WilsonInterval {
    double lo = 0;
    double hi = 1;
};

// 95% Wilson score interval; always contains successes/trials. Preferred over
// the normal approximation because trial counts here are routinely small.
inline WilsonInterval wilson95(std::uint32_t successes, std::uint32_t trials) {
    if (trials == 0) throw std::invalid_argument("wilson95: trials must be >= 1");
    if (successes > trials) throw std::invalid_argument("wilson95: successes > trials");
    const double z = 1.959963984540054; // 97.5% normal quantile
    const double nt = trials;
    const double p = successes / nt;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nt;
    const double centre = (p + z2 / (2 * nt)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / nt + z2 / (4 * nt * nt)) / denom;
    // the score interval brackets p by construction; keep that exact under
    // floating-point rounding at the p = 0 and p = 1 boundaries
    return {std::min(p, std::max(0.0, centre - half)), std::max(p, std::min(1.0, centre + half))};
}

// ---- configuration ----------------------------------------------------------

// Tunables consumed by the per-trial drivers; every field has a sensible
// default so configs only spell out what they change.
struct ExperimentParams {
    std::uint64_t budget = 0; // 0 = per-driver default (search steps / closure work)
    std::uint32_t k_max = 8;  // exhaustive expansion-set size cap
    double A = 10.0;          // prefix degree-sum slack factor
    double C = 20.0;          // containment-bound slack factor
    double c = 0.25;          // old/young cutoff fraction
    std::uint32_t omega = 0;  // degree-sum grace window; 0 = ceil(log2 n)
    double alpha = 0.05;      // expansion set-size fraction; also sets goodold's k
    int ell = 1;              // required expansion factor
    double x = 0.22791;       // good-vertex future-degree slack
    double y = 0.020063;      // tolerated bad-vertex fraction (of k)
    double d = 0.387967;      // good-vertex window exponent
};

// One sweep: a model, an edge multiplicity (plain m or a coloured m1/m2
// split), a list of n values, a property to test, and a master seed. Every
// (n, trial) pair runs with an independently derived, recomputable seed.
struct ExperimentConfig {
    std::string name = "experiment";
    std::string model;            // "ua" | "pa" | "cycle" (deterministic C_n fixture)
    std::uint32_t m1 = 1;
    std::uint32_t m2 = 0;         // > 0 means two-round colouring
    std::vector<std::uint32_t> ns;
    std::uint32_t trials = 1;
    std::string property;         // pm | hc | pm-sim | hc-sim | lowerbound | lemma:<name>
    std::uint64_t master_seed = 0;
    ExperimentParams params;

    std::uint32_t m() const { return m1 + m2; }
    void validate() const;
};

inline const std::vector<std::string>& known_properties() {
    static const std::vector<std::string> k = {
        "pm",     "hc",     "pm-sim", "hc-sim", "lowerbound",
        "lemma:total_weight", "lemma:expansion", "lemma:goodold", "lemma:edge_absence"};
    return k;
}

inline void ExperimentConfig::validate() const {
    if (model != "ua" && model != "pa" && model != "cycle")
        throw std::invalid_argument("config: model must be ua, pa or cycle, got '" + model + "'");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (ns.empty()) throw std::invalid_argument("config: at least one n required");
    for (auto n : ns)
        if (n < 1) throw std::invalid_argument("config: n values must be >= 1");
    const auto& props = known_properties();
    if (std::find(props.begin(), props.end(), property) == props.end())
        throw std::invalid_argument("config: unknown property '" + property + "'");
    if (model == "cycle") {
        if (property != "pm" && property != "hc")
            throw std::invalid_argument("config: the cycle fixture only supports pm and hc");
        for (auto n : ns)
            if (n < 3) throw std::invalid_argument("config: cycle fixture needs n >= 3");
        return;
    }
    if (m() < 1) throw std::invalid_argument("config: m must be >= 1");
    if ((property == "pm-sim" || property == "hc-sim") && (m1 < 1 || m2 < 1))
        throw std::invalid_argument("config: " + property + " needs m1 >= 1 and m2 >= 1");
    if (property == "lowerbound" && (model != "pa" || m() != 2))
        throw std::invalid_argument("config: lowerbound needs the pa model with m = 2");
    if (property == "lemma:total_weight" && model != "pa")
        throw std::invalid_argument("config: lemma:total_weight applies to the pa model only");
    if (property == "lemma:edge_absence")
        for (auto n : ns)
            if (n < 2) throw std::invalid_argument("config: lemma:edge_absence needs n >= 2");
}

// Canonical JSON for hashing and the manifest: fixed key set, nlohmann's
// sorted-object dump makes the serialization byte-stable. The cosmetic name
// is deliberately excluded from the hash so relabelled reruns still resume.
inline nlohmann::json config_to_json(const ExperimentConfig& c) {
    return {{"model", c.model},
            {"m1", c.m1},
            {"m2", c.m2},
            {"n", c.ns},
            {"trials", c.trials},
            {"property", c.property},
            {"seed", c.master_seed},
            {"params",
             {{"budget", c.params.budget},
              {"k_max", c.params.k_max},
              {"A", c.params.A},
              {"C", c.params.C},
              {"c", c.params.c},
              {"omega", c.params.omega},
              {"alpha", c.params.alpha},
              {"ell", c.params.ell},
              {"x", c.params.x},
              {"y", c.params.y},
              {"d", c.params.d}}}};
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    c.name = j.value("name", c.name);
    c.model = j.at("model").get<std::string>();
    if (j.contains("m")) {
        c.m1 = j.at("m").get<std::uint32_t>();
        c.m2 = 0;
    } else {
        c.m1 = j.value("m1", 1u);
        c.m2 = j.value("m2", 0u);
    }
    const auto& jn = j.at("n");
    if (jn.is_array())
        c.ns = jn.get<std::vector<std::uint32_t>>();
    else
        c.ns = {jn.get<std::uint32_t>()};
    c.trials = j.value("trials", 1u);
    c.property = j.at("property").get<std::string>();
    c.master_seed = j.value("seed", std::uint64_t{0});
    if (j.contains("params")) {
        const auto& p = j.at("params");
        c.params.budget = p.value("budget", c.params.budget);
        c.params.k_max = p.value("k_max", c.params.k_max);
        c.params.A = p.value("A", c.params.A);
        c.params.C = p.value("C", c.params.C);
        c.params.c = p.value("c", c.params.c);
        c.params.omega = p.value("omega", c.params.omega);
        c.params.alpha = p.value("alpha", c.params.alpha);
        c.params.ell = p.value("ell", c.params.ell);
        c.params.x = p.value("x", c.params.x);
        c.params.y = p.value("y", c.params.y);
        c.params.d = p.value("d", c.params.d);
    }
    c.validate();
    return c;
}

inline std::string config_hash(const ExperimentConfig& c) {
    return hex64(fnv1a64(config_to_json(c).dump()));
}

// ---- records ----------------------------------------------------------------

struct CellKey {
    std::string model;
    std::uint32_t m1 = 0;
    std::uint32_t m2 = 0;
    std::uint32_t n = 0;

    std::string text() const {
        return model + "|m1=" + std::to_string(m1) + "|m2=" + std::to_string(m2) +
               "|n=" + std::to_string(n);
    }
    friend bool operator==(const CellKey&, const CellKey&) = default;
};

// Seed of one trial: mix the master seed with the cell identity, then with
// the trial index. Recomputable from the record fields alone.
inline std::uint64_t trial_seed(std::uint64_t master, const CellKey& cell, std::uint32_t trial) {
    return derive_seed(derive_seed(master, fnv1a64(cell.text())), trial);
}

// One JSONL line. `success` and `stats` are fully determined by the seed;
// `elapsed_ms` is wall-clock diagnostics and the only non-reproducible field.
struct TrialRecord {
    std::string config_hash;
    CellKey cell;
    std::uint32_t trial = 0;
    std::uint64_t seed = 0;
    bool success = false;
    std::vector<double> stats;
    double elapsed_ms = 0;
};

inline nlohmann::json record_to_json(const TrialRecord& r) {
    return {{"config_hash", r.config_hash}, {"model", r.cell.model}, {"m1", r.cell.m1},
            {"m2", r.cell.m2},              {"n", r.cell.n},         {"trial", r.trial},
            {"seed", r.seed},               {"success", r.success},  {"stats", r.stats},
            {"elapsed_ms", r.elapsed_ms}};
}

inline TrialRecord record_from_json(const nlohmann::json& j) {
    TrialRecord r;
    r.config_hash = j.at("config_hash").get<std::string>();
    r.cell.model = j.at("model").get<std::string>();
    r.cell.m1 = j.at("m1").get<std::uint32_t>();
    r.cell.m2 = j.at("m2").get<std::uint32_t>();
    r.cell.n = j.at("n").get<std::uint32_t>();
    r.trial = j.at("trial").get<std::uint32_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.success = j.at("success").get<bool>();
    r.stats = j.value("stats", std::vector<double>{});
    r.elapsed_ms = j.value("elapsed_ms", 0.0);
    return r;
}

struct CellSummary {
    CellKey cell;
    std::uint32_t trials = 0;
    std::uint32_t successes = 0;
    double frequency = 0;
    WilsonInterval ci;
    std::vector<double> stat_means;
};

struct ExperimentResult {
    std::string config_hash;
    std::vector<TrialRecord> records; // resumed + newly computed, cell-major, trial order
    std::vector<CellSummary> cells;
    std::uint32_t computed = 0; // trials executed this run
    std::uint32_t resumed = 0;  // trials loaded from a previous run
};

// ---- per-trial drivers --------------------------------------------------------

namespace detail {

struct TrialOutcome {
    bool success = false;
    std::vector<double> stats;
};

inline TrialOutcome run_cycle_trial(const ExperimentConfig& cfg, const CellKey& cell,
                                    std::uint64_t seed) {
    const SimpleView g = cycle_graph(cell.n);
    if (cfg.property == "pm") {
        const Matching mm = max_matching(g);
        return {mm.size == g.n() / 2, {static_cast<double>(mm.size)}};
    }
    const std::uint64_t budget =
        cfg.params.budget ? cfg.params.budget : 20ull * cell.n + 200;
    const PosaResult r = posa_search(g, budget, derive_seed(seed, 1));
    return {r.cycle.has_value(),
            {static_cast<double>(r.longest.size()), static_cast<double>(r.steps_used)}};
}

inline TrialOutcome run_graph_trial(const ExperimentConfig& cfg, const CellKey& cell,
                                    std::uint64_t seed) {
    GenParams gp;
    gp.model = cfg.model == "ua" ? Model::uniform : Model::preferential;
    gp.n = cell.n;
    gp.m1 = cell.m1;
    gp.m2 = cell.m2;
    gp.coloured = cell.m2 > 0;
    gp.seed = seed;
    const AttachGraph g = generate(gp);
    const auto& prm = cfg.params;

    if (cfg.property == "pm") {
        const Matching mm = max_matching(simple_view(g));
        return {mm.size == g.n / 2, {static_cast<double>(mm.size)}};
    }
    if (cfg.property == "hc") {
        const std::uint64_t budget = prm.budget ? prm.budget : 20ull * cell.n + 200;
        const PosaResult r = posa_search(simple_view(g), budget, derive_seed(seed, 1));
        return {r.cycle.has_value(),
                {static_cast<double>(r.longest.size()), static_cast<double>(r.steps_used)}};
    }
    if (cfg.property == "pm-sim") {
        const AugTrace t = two_round_matching_sim(g);
        return {t.status == AugStatus::perfect,
                {static_cast<double>(t.final_size), static_cast<double>(t.steps.size())}};
    }
    if (cfg.property == "hc-sim") {
        const std::uint64_t budget = prm.budget ? prm.budget : 200ull * cell.n;
        const HamTrace t = two_round_hamilton_sim(g, budget);
        return {t.status == HamSimStatus::found,
                {static_cast<double>(t.final_path_len), static_cast<double>(t.steps.size())}};
    }
    if (cfg.property == "lowerbound") {
        const LonelyStats st = lonely_stats(g, prm.c);
        const auto h = build_H(g, prm.c);
        const auto cherries = sweet_cherries(g);
        const auto witness = no_pm_certificate(g, prm.c);
        return {witness.has_value(),
                {static_cast<double>(st.a_n), static_cast<double>(st.b_n),
                 static_cast<double>(st.c_n), static_cast<double>(st.d_n),
                 static_cast<double>(cherries.size()), static_cast<double>(h.isolated_count()),
                 witness ? static_cast<double>(witness->deficiency) : 0.0}};
    }
    if (cfg.property == "lemma:total_weight") {
        const std::uint32_t omega =
            prm.omega ? prm.omega
                      : static_cast<std::uint32_t>(std::ceil(std::log2(std::max(2u, cell.n))));
        const WeightReport rep =
            oldest_degree_bound_check(g, prm.A, omega, {1, 10, 100}, 3, derive_seed(seed, 2));
        return {rep.violations.empty(),
                {static_cast<double>(rep.checks), static_cast<double>(rep.violations.size()),
                 rep.max_ratio}};
    }
    if (cfg.property == "lemma:expansion") {
        const std::uint64_t budget = prm.budget ? prm.budget : 2000;
        const auto bad = expansion_check(simple_view(g), prm.alpha, prm.ell, prm.k_max, budget,
                                         derive_seed(seed, 3));
        return {!bad.has_value(), {bad ? static_cast<double>(bad->size()) : 0.0}};
    }
    if (cfg.property == "lemma:goodold") {
        const auto k = std::max<std::uint32_t>(
            1, static_cast<std::uint32_t>(prm.alpha * static_cast<double>(cell.n)));
        const GoodOldReport rep = good_vertices_check(g, prm.x, prm.d, k);
        const double allowance = prm.y * static_cast<double>(k);
        return {static_cast<double>(rep.bad_count) <= allowance,
                {static_cast<double>(rep.bad_count), allowance, static_cast<double>(rep.j),
                 rep.threshold}};
    }
    // lemma:edge_absence — does the youngest vertex avoid the oldest tenth?
    const std::uint32_t v = cell.n;
    const std::uint32_t w = std::max<std::uint32_t>(1, cell.n / 10);
    bool hit = false;
    const std::size_t base = static_cast<std::size_t>(v - 1) * g.m();
    for (std::uint32_t o = 0; o < g.m(); ++o)
        if (g.records[base + o].target <= w) hit = true;
    const double k = w;
    const double reference = cfg.model == "ua"
                                 ? std::pow(1.0 - k / (v - 1.0), g.m())
                                 : std::pow(1.0 - k / (2.0 * cell.n), g.m());
    return {!hit, {reference}};
}

inline TrialOutcome run_trial(const ExperimentConfig& cfg, const CellKey& cell,
                              std::uint64_t seed) {
    return cfg.model == "cycle" ? run_cycle_trial(cfg, cell, seed)
                                : run_graph_trial(cfg, cell, seed);
}

inline unsigned worker_count() {
    if (const char* s = std::getenv("ATTACHLAB_THREADS")) {
        const long v = std::strtol(s, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

inline CellSummary summarize(const CellKey& cell, const std::vector<const TrialRecord*>& recs) {
    CellSummary s;
    s.cell = cell;
    s.trials = static_cast<std::uint32_t>(recs.size());
    std::size_t width = 0;
    for (const auto* r : recs) {
        s.successes += r->success;
        width = std::max(width, r->stats.size());
    }
    s.frequency = s.trials ? static_cast<double>(s.successes) / s.trials : 0.0;
    if (s.trials) s.ci = wilson95(s.successes, s.trials);
    s.stat_means.assign(width, 0.0);
    std::vector<std::uint32_t> counts(width, 0);
    for (const auto* r : recs)
        for (std::size_t i = 0; i < r->stats.size(); ++i) {
            s.stat_means[i] += r->stats[i];
            ++counts[i];
        }
    for (std::size_t i = 0; i < width; ++i)
        if (counts[i]) s.stat_means[i] /= counts[i];
    return s;
}

} // namespace detail

// ---- the harness --------------------------------------------------------------

// Runs every (n, trial) cell of the config. With a non-empty out_dir the run
// persists manifest.json, appends one JSON line per trial to records.jsonl,
// and rewrites the derived summary.json; trials already present for this
// config hash are loaded, not recomputed, and never rewritten. Workers
// (ATTACHLAB_THREADS, default all cores) compute trials concurrently; the
// single writer emits records in deterministic cell-major, trial-index order.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       const std::string& out_dir = "") {
    cfg.validate();
    ExperimentResult result;
    result.config_hash = config_hash(cfg);

    namespace fs = std::filesystem;
    std::ofstream records_out;
    std::vector<TrialRecord> old_records;
    if (!out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec)
            throw std::runtime_error("experiment: cannot create output dir " + out_dir + ": " +
                                     ec.message());
        const fs::path manifest = fs::path(out_dir) / "manifest.json";
        if (fs::exists(manifest)) {
            std::ifstream in(manifest);
            nlohmann::json j;
            in >> j;
            const auto existing = j.value("hash", std::string{});
            if (existing != result.config_hash)
                throw std::runtime_error("experiment: " + manifest.string() +
                                         " belongs to config " + existing +
                                         ", refusing to mix with " + result.config_hash);
        } else {
            nlohmann::json j{{"name", cfg.name},
                             {"config", config_to_json(cfg)},
                             {"hash", result.config_hash}};
            std::ofstream out(manifest);
            out << j.dump(2) << '\n';
            if (!out) throw std::runtime_error("experiment: cannot write " + manifest.string());
        }
        const fs::path rec_path = fs::path(out_dir) / "records.jsonl";
        if (fs::exists(rec_path)) {
            std::ifstream in(rec_path);
            std::string line;
            std::size_t lineno = 0;
            while (std::getline(in, line)) {
                ++lineno;
                if (line.empty()) continue;
                TrialRecord r;
                try {
                    r = record_from_json(nlohmann::json::parse(line));
                } catch (const std::exception& e) {
                    throw std::runtime_error("experiment: bad record at " + rec_path.string() +
                                             ":" + std::to_string(lineno) + ": " + e.what());
                }
                if (r.config_hash == result.config_hash) old_records.push_back(std::move(r));
            }
        }
        records_out.open(rec_path, std::ios::app);
        if (!records_out)
            throw std::runtime_error("experiment: cannot append to " + rec_path.string());
    }

    const unsigned workers = detail::worker_count();
    for (const std::uint32_t n : cfg.ns) {
        const CellKey cell{cfg.model, cfg.m1, cfg.m2, n};
        // trial -> already persisted record
        std::vector<const TrialRecord*> done(cfg.trials, nullptr);
        for (const auto& r : old_records)
            if (r.cell == cell && r.trial < cfg.trials && !done[r.trial]) done[r.trial] = &r;

        std::vector<std::uint32_t> todo;
        for (std::uint32_t t = 0; t < cfg.trials; ++t)
            if (!done[t]) todo.push_back(t);

        std::vector<TrialRecord> fresh(todo.size());
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto work = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= todo.size() || failed.load()) return;
                const std::uint32_t t = todo[i];
                TrialRecord r;
                r.config_hash = result.config_hash;
                r.cell = cell;
                r.trial = t;
                r.seed = trial_seed(cfg.master_seed, cell, t);
                const auto t0 = std::chrono::steady_clock::now();
                try {
                    const auto out = detail::run_trial(cfg, cell, r.seed);
                    r.success = out.success;
                    r.stats = out.stats;
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true);
                    return;
                }
                const auto dt = std::chrono::steady_clock::now() - t0;
                r.elapsed_ms =
                    std::round(std::chrono::duration<double, std::milli>(dt).count() * 1000.0) /
                    1000.0;
                fresh[i] = std::move(r);
            }
        };
        if (workers <= 1 || todo.size() <= 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            const unsigned k = std::min<std::size_t>(workers, todo.size());
            pool.reserve(k);
            for (unsigned i = 0; i < k; ++i) pool.emplace_back(work);
            for (auto& th : pool) th.join();
        }
        if (first_error) {
            try {
                std::rethrow_exception(first_error);
            } catch (const std::exception& e) {
                throw std::runtime_error("experiment: cell " + cell.text() + ": " + e.what());
            }
        }

        // single writer: emit this cell's records in trial order
        const std::size_t cell_start = result.records.size();
        std::size_t fresh_i = 0;
        for (std::uint32_t t = 0; t < cfg.trials; ++t) {
            if (done[t]) {
                result.records.push_back(*done[t]);
                ++result.resumed;
            } else {
                TrialRecord& r = fresh[fresh_i++];
                if (records_out.is_open()) {
                    records_out << record_to_json(r).dump() << '\n';
                    if (!records_out)
                        throw std::runtime_error("experiment: write failed for cell " +
                                                 cell.text());
                }
                result.records.push_back(std::move(r));
                ++result.computed;
            }
        }
        if (records_out.is_open()) records_out.flush();
        std::vector<const TrialRecord*> cell_recs;
        for (std::size_t i = cell_start; i < result.records.size(); ++i)
            cell_recs.push_back(&result.records[i]);
        result.cells.push_back(detail::summarize(cell, cell_recs));
    }

    if (!out_dir.empty()) {
        nlohmann::json cells = nlohmann::json::array();
        for (const auto& s : result.cells)
            cells.push_back({{"model", s.cell.model},
                             {"m1", s.cell.m1},
                             {"m2", s.cell.m2},
                             {"n", s.cell.n},
                             {"trials", s.trials},
                             {"successes", s.successes},
                             {"frequency", s.frequency},
                             {"wilson_lo", s.ci.lo},
                             {"wilson_hi", s.ci.hi},
                             {"stat_means", s.stat_means}});
        nlohmann::json j{{"config_hash", result.config_hash}, {"cells", cells}};
        std::ofstream out(std::filesystem::path(out_dir) / "summary.json");
        out << j.dump(2) << '\n';
        if (!out) throw std::runtime_error("experiment: cannot write summary.json");
    }
    return result;
}

// ---- report rendering -----------------------------------------------------------

// Re-aggregates records.jsonl (the authoritative store) and renders the
// per-cell table as CSV or a markdown table.
inline std::string render_report(const std::string& dir, const std::string& format) {
    if (format != "csv" && format != "md")
        throw std::invalid_argument("report: format must be csv or md");
    namespace fs = std::filesystem;
    const fs::path rec_path = fs::path(dir) / "records.jsonl";
    std::ifstream in(rec_path);
    if (!in) throw std::runtime_error("report: cannot open " + rec_path.string());

    std::vector<TrialRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            records.push_back(record_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error("report: bad record at " + rec_path.string() + ":" +
                                     std::to_string(lineno) + ": " + e.what());
        }
    }

    // group by (config hash, cell), preserving first-seen order
    std::vector<std::pair<std::string, CellKey>> order;
    std::vector<std::vector<const TrialRecord*>> groups;
    for (const auto& r : records) {
        const std::pair<std::string, CellKey> key{r.config_hash, r.cell};
        std::size_t g = 0;
        for (; g < order.size(); ++g)
            if (order[g] == key) break;
        if (g == order.size()) {
            order.push_back(key);
            groups.emplace_back();
        }
        groups[g].push_back(&r);
    }

    std::ostringstream out;
    out.precision(6);
    if (format == "csv")
        out << "config_hash,model,m1,m2,n,trials,successes,frequency,wilson_lo,wilson_hi\n";
    else
        out << "| config | model | m1 | m2 | n | trials | successes | frequency | wilson 95% |\n"
            << "|---|---|---|---|---|---|---|---|---|\n";
    for (std::size_t g = 0; g < order.size(); ++g) {
        const CellSummary s = detail::summarize(order[g].second, groups[g]);
        const std::string& hash = order[g].first;
        if (format == "csv")
            out << hash << ',' << s.cell.model << ',' << s.cell.m1 << ',' << s.cell.m2 << ','
                << s.cell.n << ',' << s.trials << ',' << s.successes << ',' << s.frequency << ','
                << s.ci.lo << ',' << s.ci.hi << '\n';
        else
            out << "| " << hash.substr(0, 8) << " | " << s.cell.model << " | " << s.cell.m1
                << " | " << s.cell.m2 << " | " << s.cell.n << " | " << s.trials << " | "
                << s.successes << " | " << s.frequency << " | [" << s.ci.lo << ", " << s.ci.hi
                << "] |\n";
    }
    return out.str();
}

// ---- companion statistics -------------------------------------------------------

// Component count of the m = 1 preferential graph: each vertex starts a new
// component exactly when it self-loops, so the expected count is the exact
// sum of 1/(2t-1) and grows like (1/2) log n.
struct ComponentStats {
    double mean = 0;
    double sigma = 0;          // sample standard deviation
    double reference = 0;      // (1/2) log n
    double exact_expected = 0; // sum_{t=1..n} 1/(2t-1)
    std::vector<std::uint32_t> counts;
};

inline ComponentStats component_count_check(std::uint32_t n, std::uint32_t trials,
                                            std::uint64_t seed) {
    if (n < 1 || trials < 1)
        throw std::invalid_argument("component_count_check: n and trials must be >= 1");
    ComponentStats st;
    st.counts.reserve(trials);
    std::vector<std::uint32_t> parent(n + 1);
    auto find = [&](std::uint32_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (std::uint32_t t = 0; t < trials; ++t) {
        const AttachGraph g =
            generate({Model::preferential, n, 1, 0, false, derive_seed(seed, t)});
        for (std::uint32_t v = 0; v <= n; ++v) parent[v] = v;
        std::uint32_t comps = n;
        for (const EdgeRecord& r : g.records) {
            const auto a = find(r.stem), b = find(r.target);
            if (a != b) {
                parent[a] = b;
                --comps;
            }
        }
        st.counts.push_back(comps);
        st.mean += comps;
    }
    st.mean /= trials;
    double ss = 0;
    for (auto c : st.counts) ss += (c - st.mean) * (c - st.mean);
    st.sigma = trials > 1 ? std::sqrt(ss / (trials - 1)) : 0.0;
    st.reference = 0.5 * std::log(static_cast<double>(n));
    long double acc = 0;
    for (std::uint32_t t = n; t >= 1; --t) acc += 1.0L / (2.0L * t - 1.0L);
    st.exact_expected = static_cast<double>(acc);
    return st;
}

// Least-squares fit of log ccdf against log k over k in [5, 100]. A pdf tail
// falling off like k^-3 shows up as a ccdf slope of -2. `ok` demands enough
// usable points, spread in the ccdf, and a tight fit — a regular graph's
// degenerate step ccdf is rejected rather than fitted.
struct PowerLawFit {
    double slope = 0;
    double r2 = 0;
    std::uint32_t points = 0;
    bool ok = false;
    std::uint64_t max_degree = 0;
    std::uint64_t samples = 0;
};

inline PowerLawFit degree_powerlaw_fit(const std::vector<std::uint64_t>& degrees) {
    PowerLawFit fit;
    fit.samples = degrees.size();
    if (degrees.empty()) return fit;
    std::uint64_t maxd = 0;
    for (auto d : degrees) maxd = std::max(maxd, d);
    fit.max_degree = maxd;
    std::vector<std::uint64_t> hist(maxd + 2, 0);
    for (auto d : degrees) ++hist[d];
    // tail[k] = #degrees >= k
    std::vector<std::uint64_t> tail(maxd + 2, 0);
    for (std::uint64_t k = maxd + 1; k-- > 0;)
        tail[k] = hist[k] + (k + 1 <= maxd + 1 ? tail[k + 1] : 0);

    std::vector<double> xs, ys;
    for (std::uint64_t k = 5; k <= 100; ++k) {
        const std::uint64_t cnt = k <= maxd + 1 ? tail[k] : 0;
        if (cnt == 0) continue;
        xs.push_back(std::log(static_cast<double>(k)));
        ys.push_back(std::log(static_cast<double>(cnt) / static_cast<double>(degrees.size())));
    }
    fit.points = static_cast<std::uint32_t>(xs.size());
    if (fit.points < 2) return fit;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= fit.points;
    my /= fit.points;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0 || syy == 0) return fit; // degenerate: vertical or flat ccdf
    fit.slope = sxy / sxx;
    fit.r2 = (sxy * sxy) / (sxx * syy);
    fit.ok = fit.points >= 10 && fit.r2 >= 0.9;
    return fit;
}

inline PowerLawFit degree_powerlaw_check(std::uint32_t n, std::uint32_t m, std::uint32_t trials,
                                         std::uint64_t seed) {
    if (n < 1 || m < 1 || trials < 1)
        throw std::invalid_argument("degree_powerlaw_check: n, m, trials must be >= 1");
    std::vector<std::uint64_t> degrees;
    degrees.reserve(static_cast<std::size_t>(n) * trials);
    std::vector<std::uint64_t> deg(n + 1);
    for (std::uint32_t t = 0; t < trials; ++t) {
        const AttachGraph g =
            generate({Model::preferential, n, m, 0, false, derive_seed(seed, t)});
        std::fill(deg.begin(), deg.end(), 0);
        for (const EdgeRecord& r : g.records) {
            ++deg[r.stem];
            ++deg[r.target]; // a self-loop contributes 2, as in the process
        }
        degrees.insert(degrees.end(), deg.begin() + 1, deg.end());
    }
    return degree_powerlaw_fit(degrees);
}

} // namespace attachlab
