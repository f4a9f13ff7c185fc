// acceptance.cpp — release gate: one pass/fail line per criterion.
//
// Usage: acceptance [N]   (run criterion N only; default: all)
//
// Every tolerance is pinned here in code. Criteria that measure randomised
// quantities use fixed seeds, so reruns are bit-for-bit repeatable. A [FAIL]
// line is an honest result, never a flaky one: the detail lines below it show
// the measured values next to the pinned expectations.
#include <attachlab/analysis.hpp>
#include <attachlab/core.hpp>
#include <attachlab/experiments.hpp>
#include <attachlab/generate.hpp>
#include <attachlab/hamilton.hpp>
#include <attachlab/lowerbound.hpp>
#include <attachlab/matching.hpp>
#include <attachlab/rng.hpp>

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace attachlab;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;
};

std::string fmt(double v, int prec = 6) {
    std::ostringstream ss;
    ss << std::setprecision(prec) << v;
    return ss.str();
}

// ---- 1. constant-set inequalities -----------------------------------------

Outcome crit_constant_sets() {
    Outcome o;
    for (char id : {'a', 'b', 'c', 'd'}) {
        const ConditionReport rep = check_conditions(published_set(id));
        std::ostringstream ss;
        ss << "set (" << id << "): ";
        if (rep.overall) {
            ss << "all " << rep.conditions.size() << " inequalities hold";
        } else {
            o.pass = false;
            ss << "violated:";
            for (const auto& c : rep.conditions)
                if (!c.satisfied)
                    ss << ' ' << c.name << " [lhs " << fmt(c.lhs, 12) << " vs rhs "
                       << fmt(c.rhs, 12) << ']';
        }
        o.notes.push_back(ss.str());
    }
    return o;
}

// ---- 2. root solvers --------------------------------------------------------

Outcome crit_root_solvers() {
    Outcome o;
    struct Row {
        const char* name;
        double value, bound, closed;
    };
    const Row rows[] = {
        {"gamma(120)", gamma_of_m(120), 0.06238, std::sqrt(4.0 * std::log(3.0) / 120)},
        {"gamma(500)", gamma_of_m(500), 0.019675, std::sqrt(4.0 * std::log(3.0) / 500)},
        {"beta(2900)", beta_of_m(2900), 0.014414, std::sqrt(2.0 * std::log(2.0) / 2900)},
        {"beta(14000)", beta_of_m(14000), 0.003760, std::sqrt(2.0 * std::log(2.0) / 14000)},
    };
    for (const Row& r : rows) {
        const bool ok =
            r.value <= r.bound && r.bound - r.value <= 5e-4 && r.value < r.closed;
        o.pass = o.pass && ok;
        o.notes.push_back(std::string(r.name) + " = " + fmt(r.value, 12) + " (cap " +
                          fmt(r.bound, 12) + ", slack " + fmt(r.bound - r.value, 3) +
                          ", closed-form cap " + fmt(r.closed, 6) + ")" +
                          (ok ? "" : "  <- VIOLATED"));
    }
    return o;
}

// ---- 3. success-rate inequalities -------------------------------------------

Outcome crit_success_rates() {
    Outcome o;
    struct Row {
        const char* name;
        double lhs, rhs;
    };
    const Row rows[] = {
        {"success_rate(0.0538, 39, plain) > gamma(120)/2", success_rate(0.0538, 39, false),
         gamma_of_m(120) / 2},
        {"success_rate(0.032003, 314, plain) > 2*beta(2900)",
         success_rate(0.032003, 314, false), 2 * beta_of_m(2900)},
        {"success_rate(0.016801, 260, halved) > gamma(500)/2",
         success_rate(0.016801, 260, true), gamma_of_m(500) / 2},
        {"success_rate(0.008874, 1500, halved) > 2*beta(14000)",
         success_rate(0.008874, 1500, true), 2 * beta_of_m(14000)},
    };
    for (const Row& r : rows) {
        const bool ok = r.lhs > r.rhs;
        o.pass = o.pass && ok;
        o.notes.push_back(std::string(r.name) + ": " + fmt(r.lhs, 12) + " vs " +
                          fmt(r.rhs, 12) + " (margin " + fmt(r.lhs - r.rhs, 3) + ")" +
                          (ok ? "" : "  <- VIOLATED"));
    }
    return o;
}

// ---- 4. oracle equivalence ---------------------------------------------------

Outcome crit_oracles() {
    Outcome o;

    // maximum matching vs exhaustive optimum, n <= 10
    {
        Rng rnd(0xACC4u);
        int graphs = 0;
        for (int trial = 0; trial < 260 && o.pass; ++trial) {
            const std::uint32_t n = 2 + rnd.bounded(9);
            const auto g = oracle::gnp(n, 0.1 + 0.6 * rnd.next_double(), rnd);
            if (max_matching(g).size != static_cast<std::uint32_t>(oracle::max_matching_size(g))) {
                o.pass = false;
                o.notes.push_back("matching mismatch on a density-" + fmt(n, 2) +
                                  " random graph (trial " + std::to_string(trial) + ")");
            }
            ++graphs;
        }
        for (int trial = 0; trial < 260 && o.pass; ++trial) {
            GenParams p;
            p.model = trial % 2 ? Model::uniform : Model::preferential;
            p.n = 2 + rnd.bounded(9);
            p.m1 = 1 + rnd.bounded(3);
            p.seed = rnd.next_u64();
            const SimpleView sv = simple_view(generate(p));
            if (max_matching(sv).size != static_cast<std::uint32_t>(oracle::max_matching_size(sv))) {
                o.pass = false;
                o.notes.push_back("matching mismatch on an attachment graph (trial " +
                                  std::to_string(trial) + ")");
            }
            ++graphs;
        }
        o.notes.push_back("maximum matching equals the exhaustive optimum on " +
                          std::to_string(graphs) + " graphs with n <= 10");
    }

    // rotation search soundness vs the exact decision, n <= 14
    {
        Rng rnd(0xACC5u);
        int cycles = 0, false_cycles = 0;
        const int graphs = 220;
        for (int trial = 0; trial < graphs; ++trial) {
            const std::uint32_t n = 3 + rnd.bounded(12);
            const auto g = oracle::gnp_connected(n, 0.2 + 0.5 * rnd.next_double(), rnd);
            const PosaResult r = posa_search(g, 4000, rnd.next_u64());
            if (r.cycle) {
                ++cycles;
                if (!is_valid_cycle(g, *r.cycle) || !exact_hamiltonian(g)) ++false_cycles;
            }
        }
        if (false_cycles) o.pass = false;
        o.notes.push_back("rotation search returned " + std::to_string(cycles) +
                          " cycles over " + std::to_string(graphs) + " graphs (n <= 14); " +
                          std::to_string(false_cycles) + " disagreed with the exact decision");
    }

    // isolatable-set expansion: |N(B(u))| < |B(u)| wherever applicable, n <= 12
    {
        Rng rnd(0xACC6u);
        int applicable = 0, counterexamples = 0;
        const int graphs = 300;
        for (int trial = 0; trial < graphs; ++trial) {
            const std::uint32_t n = 3 + rnd.bounded(10);
            const auto g = oracle::gnp(n, 0.1 + 0.5 * rnd.next_double(), rnd);
            const auto rep = check_matching_expansion(g);
            applicable += rep.applicable;
            counterexamples += rep.counterexample.has_value();
        }
        if (counterexamples) o.pass = false;
        o.notes.push_back("isolatable-set expansion held on " + std::to_string(applicable) +
                          " applicable of " + std::to_string(graphs) + " graphs (n <= 12); " +
                          std::to_string(counterexamples) + " counterexamples");
    }

    // endpoint-set expansion: |N(END)| < 2|END| on every longest path, n <= 12
    {
        Rng rnd(0xBEEFu);
        int paths = 0, violations = 0;
        for (int trial = 0; trial < 120; ++trial) {
            const std::uint32_t n = 3 + rnd.bounded(10);
            const auto g = oracle::gnp(n, 0.1 + 0.5 * rnd.next_double(), rnd);
            oracle::LongestPaths lp;
            std::vector<std::vector<std::uint32_t>> seqs;
            if (!lp.enumerate(g, 4000, seqs)) continue; // capped out: skip instance
            for (const auto& seq : seqs) {
                const auto s = end_set(g, PathState{seq});
                const auto nb = neighbourhood(g, s);
                violations += nb.size() >= 2 * s.size();
                ++paths;
            }
        }
        if (violations || paths < 500) o.pass = false;
        o.notes.push_back("endpoint-set expansion held on " + std::to_string(paths) +
                          " exhaustively enumerated longest paths (floor 500); " +
                          std::to_string(violations) + " violations");
    }
    return o;
}

// ---- 5. generator distribution ------------------------------------------------

Outcome crit_generator_distribution() {
    Outcome o;

    // preferential n=3, m=1: the two free choices have an exactly enumerable
    // law over 6 outcomes; chi-square at significance 1e-3 (df = 5)
    {
        const double expected[2][3] = {{6 / 15.0, 2 / 15.0, 2 / 15.0},
                                       {2 / 15.0, 2 / 15.0, 1 / 15.0}};
        long counts[2][3] = {};
        GenParams p;
        p.model = Model::preferential;
        p.n = 3;
        p.m1 = 1;
        const long trials = 1000000;
        for (long i = 0; i < trials; ++i) {
            p.seed = derive_seed(0xACC7u, static_cast<std::uint64_t>(i));
            const AttachGraph g = generate(p);
            const std::uint32_t t2 = g.records[1].target;
            const std::uint32_t t3 = g.records[2].target;
            ++counts[t2 == 1 ? 0 : 1][t3 - 1];
        }
        std::vector<double> obs, expd;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 3; ++b) {
                obs.push_back(static_cast<double>(counts[a][b]));
                expd.push_back(expected[a][b] * static_cast<double>(trials));
            }
        const double stat = oracle::chi2_stat(obs, expd);
        const double crit = 20.515005652432878; // chi-square 0.999 quantile, df = 5
        if (!(stat < crit)) o.pass = false;
        o.notes.push_back("preferential n=3 m=1 over 1e6 seeds: chi2 = " + fmt(stat, 4) +
                          " (0.999 quantile " + fmt(crit, 6) + ")");
    }

    // uniform edge absence matches (1 - |W|/(v-1))^m within 4 sigma
    {
        struct Cell {
            std::uint32_t n, v, m, wsize, trials;
            std::uint64_t seed;
        };
        const Cell cells[] = {{12, 10, 2, 3, 200000, 0xACD0u},
                              {50, 50, 3, 5, 100000, 0xACD1u}};
        for (const Cell& c : cells) {
            GenParams p;
            p.n = c.n;
            p.m1 = c.m;
            p.seed = c.seed;
            std::vector<std::uint32_t> w(c.wsize);
            for (std::uint32_t i = 0; i < c.wsize; ++i) w[i] = i + 1;
            const EdgeAbsenceReport r = edge_absence_freq(p, c.v, w, c.trials);
            const double exact =
                std::pow(1.0 - static_cast<double>(c.wsize) / (c.v - 1.0), c.m);
            const double sigma = std::sqrt(exact * (1 - exact) / c.trials);
            const bool ok = std::abs(r.exact_uniform - exact) < 1e-12 &&
                            std::abs(r.freq - exact) <= 4 * sigma;
            o.pass = o.pass && ok;
            o.notes.push_back("uniform absence n=" + std::to_string(c.n) + " v=" +
                              std::to_string(c.v) + " |W|=" + std::to_string(c.wsize) +
                              " m=" + std::to_string(c.m) + ": freq " + fmt(r.freq, 6) +
                              " vs exact " + fmt(exact, 6) + " (" +
                              fmt(std::abs(r.freq - exact) / sigma, 3) + " sigma)" +
                              (ok ? "" : "  <- VIOLATED"));
        }
    }
    return o;
}

// ---- 6. old-vertex degree-sum trajectory ---------------------------------------

Outcome crit_degree_sum() {
    Outcome o;
    const std::uint32_t n = 100000, cut = 25000;
    const double target = 2.0 * 2 * n * 0.5; // 2 m n sqrt(c), m = 2, c = 1/4
    const int trials = 30;
    double sum_ratio = 0;
    GenParams p;
    p.model = Model::preferential;
    p.n = n;
    p.m1 = 2;
    for (int i = 0; i < trials; ++i) {
        p.seed = derive_seed(0xACC8u, static_cast<std::uint64_t>(i));
        const AttachGraph g = generate(p);
        double y = 0; // degree sum of the cut oldest vertices (loops count twice)
        for (const EdgeRecord& r : g.records) {
            y += r.stem <= cut;
            y += r.target <= cut;
        }
        sum_ratio += y / target;
    }
    const double mean = sum_ratio / trials;
    o.pass = mean >= 0.97 && mean <= 1.03;
    o.notes.push_back("mean Y_n / (2 m n sqrt(c)) = " + fmt(mean, 6) + " over " +
                      std::to_string(trials) + " trials (window [0.97, 1.03])");
    return o;
}

// ---- 7. lonely-vertex classes and survivor graph --------------------------------

Outcome crit_lonely_classes() {
    Outcome o;
    const std::uint32_t n = 100000;
    const int trials = 30;
    const double centres[4] = {0.1875, 0.2083, 0.03125, 0.21875};
    double sums[4] = {0, 0, 0, 0};
    int iso_violations = 0;
    long iso_excess = 0;
    int cherries = 0, cherry_violations = 0;
    for (int i = 0; i < trials; ++i) {
        const AttachGraph g = generate({Model::preferential, n, 2, 0, false,
                                        derive_seed(0x10adu, static_cast<std::uint64_t>(i))});
        const LonelyStats st = lonely_stats(g, 0.25);
        sums[0] += st.a_n;
        sums[1] += st.b_n;
        sums[2] += st.c_n;
        sums[3] += st.d_n;

        const SurvivorGraph h = build_H(g, 0.25);
        const std::uint32_t iso = h.isolated_count();
        if (iso != st.a_n + st.c_n) {
            ++iso_violations;
            iso_excess += static_cast<long>(iso) - static_cast<long>(st.a_n + st.c_n);
        }

        for (const CherryWitness& w : sweet_cherries(g)) {
            ++cherries;
            // breadth-first component of v2 in the survivor graph
            std::vector<std::uint32_t> comp{w.v2}, stack{w.v2};
            std::vector<char> seen(n + 1, 0);
            seen[w.v2] = 1;
            while (!stack.empty()) {
                const std::uint32_t v = stack.back();
                stack.pop_back();
                for (std::uint32_t u : h.view.adj(v))
                    if (!h.removed[u] && !seen[u]) {
                        seen[u] = 1;
                        comp.push_back(u);
                        stack.push_back(u);
                    }
            }
            std::sort(comp.begin(), comp.end());
            const std::vector<std::uint32_t> want{w.v2, w.v3, w.v4};
            if (h.removed[w.v2] || comp != want) ++cherry_violations;
        }
    }

    const char* names[4] = {"A_n/n", "B_n/n", "C_n/n", "D_n/n"};
    bool classes_ok = true;
    for (int k = 0; k < 4; ++k) {
        const double mean = sums[k] / trials / n;
        const bool ok = std::abs(mean - centres[k]) <= 0.10 * centres[k];
        classes_ok = classes_ok && ok;
        o.notes.push_back(std::string(names[k]) + " mean " + fmt(mean, 5) + " vs " +
                          fmt(centres[k], 5) + " (10% window)" + (ok ? "" : "  <- VIOLATED"));
    }
    o.notes.push_back("isolated(H) == A_n + C_n held on " +
                      std::to_string(trials - iso_violations) + "/" + std::to_string(trials) +
                      " instances (total excess " + std::to_string(iso_excess) +
                      "); the identity is only asymptotic — a young lonely vertex whose "
                      "other target is a self-loop is isolated yet not in class A");
    o.notes.push_back(std::to_string(cherries) + " sweet-cherry witnesses checked; " +
                      std::to_string(cherry_violations) + " were not a 3-vertex component");
    o.pass = classes_ok && iso_violations == 0 && cherry_violations == 0 && cherries > 0;
    return o;
}

// ---- 8. no-perfect-matching witnesses at scale ----------------------------------

Outcome crit_no_pm_witness() {
    Outcome o;
    const int trials = 30;
    int found = 0;
    for (int i = 0; i < trials; ++i) {
        const AttachGraph g = generate({Model::preferential, 200000, 2, 0, false,
                                        derive_seed(0xCE27u, static_cast<std::uint64_t>(i))});
        found += no_pm_certificate(g, 0.25).has_value();
    }
    const double rate = static_cast<double>(found) / trials;
    o.notes.push_back("deficiency witness found on " + std::to_string(found) + "/" +
                      std::to_string(trials) + " graphs at n = 200000 (floor 0.50)");

    int disagreements = 0, small_witnesses = 0;
    const int small_trials = 12;
    for (int i = 0; i < small_trials; ++i) {
        const AttachGraph g = generate({Model::preferential, 1800, 2, 0, false,
                                        derive_seed(0x7E57u, static_cast<std::uint64_t>(i))});
        const auto w = no_pm_certificate(g, 0.25); // self-checks vs exact matching
        if (w) {
            ++small_witnesses;
            if (has_perfect_matching(simple_view(g))) ++disagreements;
        }
    }
    o.notes.push_back("exact cross-validation at n = 1800: " +
                      std::to_string(small_witnesses) + "/" + std::to_string(small_trials) +
                      " witnesses, " + std::to_string(disagreements) + " disagreements");
    o.pass = rate >= 0.5 && disagreements == 0;
    return o;
}

// ---- 9. component count of the m = 1 preferential forest -------------------------

Outcome crit_component_count() {
    Outcome o;
    const ComponentStats st = component_count_check(10000, 100, 31);
    const double half_log = st.reference; // (1/2) log n
    const double se = st.sigma / std::sqrt(static_cast<double>(st.counts.size()));
    const bool within15 = std::abs(st.mean - half_log) <= 0.15 * half_log;
    const bool within3se = std::abs(st.mean - st.exact_expected) <= 3 * se;
    o.notes.push_back("mean components = " + fmt(st.mean, 5) + " over 100 trials at n = 10000");
    o.notes.push_back("vs (1/2) log n = " + fmt(half_log, 5) + ": deviation " +
                      fmt(std::abs(st.mean - half_log), 4) + ", 15% window " +
                      fmt(0.15 * half_log, 4) + (within15 ? "" : "  <- VIOLATED"));
    o.notes.push_back("vs exact sum 1/(2t-1) = " + fmt(st.exact_expected, 10) +
                      ": deviation " + fmt(std::abs(st.mean - st.exact_expected), 4) +
                      ", 3-sigma window " + fmt(3 * se, 4) + (within3se ? "" : "  <- VIOLATED"));
    if (!within15)
        o.notes.push_back("note: the exact mean itself sits " +
                          fmt(100 * (st.exact_expected - half_log) / half_log, 3) +
                          "% above (1/2) log n at this n — the 15% clause cannot hold "
                          "while the 3-sigma clause does");
    o.pass = within15 && within3se;
    return o;
}

// ---- 10. degree power law ---------------------------------------------------------

Outcome crit_power_law() {
    Outcome o;
    const PowerLawFit fit = degree_powerlaw_check(1000000, 3, 5, 33);
    o.pass = fit.ok && fit.slope >= -2.3 && fit.slope <= -1.7;
    o.notes.push_back("ccdf log-log slope = " + fmt(fit.slope, 5) + " (window [-2.3, -1.7]), r2 = " +
                      fmt(fit.r2, 5) + ", " + std::to_string(fit.points) + " points, max degree " +
                      std::to_string(fit.max_degree));
    return o;
}

// ---- 11. threshold substitution at desk scale -------------------------------------

Outcome crit_desk_scale_substitute() {
    Outcome o;
    o.notes.push_back("the asymptotic edge-count thresholds (159 / 1260 / 3214 / 29500) "
                      "concern the n -> infinity limit and are not decidable at desk "
                      "scale; criteria 1-4 carry the deterministic content");
    const int trials = 50;
    int perfect = 0;
    for (int i = 0; i < trials; ++i) {
        const AttachGraph g = generate({Model::uniform, 2000, 120, 39, true,
                                        derive_seed(0xACCCu, static_cast<std::uint64_t>(i))});
        perfect += two_round_matching_sim(g).status == AugStatus::perfect;
    }
    const double rate = static_cast<double>(perfect) / trials;
    o.pass = rate >= 0.95;
    o.notes.push_back("two-round matching replay (n = 2000, 120 + 39 edges): completed " +
                      std::to_string(perfect) + "/" + std::to_string(trials) +
                      " (measured rate " + fmt(rate, 4) + ", floor 0.95)");
    return o;
}

struct Criterion {
    int id;
    const char* title;
    Outcome (*fn)();
    double cap_seconds; // 0 = no cap
};

const Criterion kCriteria[] = {
    {1, "constant-set inequalities hold for all four published sets", crit_constant_sets, 1},
    {2, "root solvers match their frozen caps and closed-form bounds", crit_root_solvers, 1},
    {3, "success-rate inequalities clear their thresholds", crit_success_rates, 0},
    {4, "search algorithms agree with exhaustive oracles", crit_oracles, 300},
    {5, "generator distributions match the exact laws", crit_generator_distribution, 120},
    {6, "old-vertex degree sum tracks 2 m n sqrt(c)", crit_degree_sum, 180},
    {7, "lonely-vertex class frequencies and survivor-graph structure", crit_lonely_classes, 300},
    {8, "no-perfect-matching witnesses at scale, cross-validated exactly", crit_no_pm_witness, 0},
    {9, "component count of the m = 1 preferential forest", crit_component_count, 0},
    {10, "degree distribution has an inverse-cube tail", crit_power_law, 0},
    {11, "desk-scale substitute for the asymptotic thresholds", crit_desk_scale_substitute, 0},
};

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) {
        only = std::atoi(argv[1]);
        if (only < 1 || only > 11) {
            std::cerr << "usage: acceptance [1..11]\n";
            return 2;
        }
    }
    int failed = 0, ran = 0;
    for (const Criterion& c : kCriteria) {
        if (only && c.id != only) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.notes.push_back(std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.cap_seconds > 0 && secs >= c.cap_seconds) {
            o.pass = false;
            o.notes.push_back("runtime " + fmt(secs, 3) + "s exceeded the " +
                              fmt(c.cap_seconds, 3) + "s cap");
        }
        std::printf("[%s] criterion %2d: %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", c.id,
                    c.title, secs);
        for (const std::string& n : o.notes) std::printf("         - %s\n", n.c_str());
        std::fflush(stdout);
        failed += !o.pass;
        ++ran;
    }
    std::printf("%d/%d criteria passed\n", ran - failed, ran);
    return failed ? 1 : 0;
}
