// attachlab — command-line front end for the attachment-graph library.
//
// Subcommands:
//   gen         write a generated graph in the canonical edge-list format
//   match       maximum matching, perfect-matching verdict, optional certificate
//   ham         Hamiltonian-cycle search via rotation-extension
//   verify      constant-set inequalities and per-lemma spot checks
//   lowerbound  lonely-vertex statistics and no-PM certificate rates (pa, m=2)
//   experiment  run a JSON-configured Monte Carlo sweep (resumable)
//   report      render a persisted experiment as CSV or markdown
//
// All analysis output is JSON on stdout; verification subcommands exit 1 when
// the checked property fails, 2 on usage or I/O errors.
#include <CLI11.hpp>
#include <json.hpp>

#include <attachlab/analysis.hpp>
#include <attachlab/core.hpp>
#include <attachlab/experiments.hpp>
#include <attachlab/generate.hpp>
#include <attachlab/hamilton.hpp>
#include <attachlab/lowerbound.hpp>
#include <attachlab/matching.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using nlohmann::json;
using namespace attachlab;

namespace {

struct GenFlags {
    std::string model;
    std::uint32_t n = 0;
    std::uint32_t m = 0;
    std::uint32_t m1 = 0;
    std::uint32_t m2 = 0;
    std::uint64_t seed = 0;
};

void add_gen_flags(CLI::App& cmd, GenFlags& f, bool require) {
    auto* model_opt =
        cmd.add_option("--model", f.model, "ua or pa")->check(CLI::IsMember({"ua", "pa"}));
    auto* n_opt = cmd.add_option("--n", f.n, "number of vertices");
    if (require) {
        model_opt->required();
        n_opt->required();
    }
    cmd.add_option("--m", f.m, "edges per vertex (plain, uncoloured)");
    cmd.add_option("--m1", f.m1, "first-round (blue) edges per vertex");
    cmd.add_option("--m2", f.m2, "second-round (red) edges per vertex");
    cmd.add_option("--seed", f.seed, "generator seed");
}

GenParams to_params(const GenFlags& f) {
    GenParams p;
    if (f.model != "ua" && f.model != "pa")
        throw CLI::ValidationError("--model", "required (ua or pa) when generating");
    if (f.n == 0) throw CLI::ValidationError("--n", "required when generating");
    p.model = f.model == "ua" ? Model::uniform : Model::preferential;
    p.n = f.n;
    if (f.m != 0 && (f.m1 != 0 || f.m2 != 0))
        throw CLI::ValidationError("--m", "use either --m or the --m1/--m2 split, not both");
    if (f.m != 0) {
        p.m1 = f.m;
        p.m2 = 0;
        p.coloured = false;
    } else {
        if (f.m1 == 0) throw CLI::ValidationError("--m1", "one of --m or --m1 is required");
        p.m1 = f.m1;
        p.m2 = f.m2;
        p.coloured = f.m2 > 0;
    }
    p.seed = f.seed;
    return p;
}

json matching_json(const SimpleView& sv, bool certify) {
    const Matching mm = max_matching(sv);
    json out{{"n", sv.n()},
             {"nu", mm.size},
             {"perfect", mm.size == sv.n() / 2}};
    if (certify) {
        // Gallai–Edmonds: take S = N(D) for D = the isolatable vertices; when
        // no perfect matching exists this S maximizes the Tutte deficiency.
        const auto d = isolatable_set(sv);
        const auto s = neighbourhood(sv, d);
        const auto witness = tutte_certificate(sv, s);
        if (witness) {
            out["certificate"] = {{"s", s},
                                  {"s_size", witness->s_size},
                                  {"odd_components", witness->odd_components},
                                  {"deficiency", witness->deficiency}};
        } else {
            out["certificate"] = nullptr;
        }
    }
    return out;
}

ConstantSet constant_set_from_json(const json& j) {
    ConstantSet s;
    s.m = j.at("m").get<int>();
    s.ell = j.at("ell").get<int>();
    s.alpha = j.at("alpha").get<double>();
    s.x = j.at("x").get<double>();
    s.y = j.at("y").get<double>();
    s.z = j.at("z").get<double>();
    s.d = j.at("d").get<double>();
    s.primed = j.value("primed", false);
    return s;
}

json condition_report_json(const ConditionReport& rep) {
    json conds = json::array();
    for (const auto& c : rep.conditions)
        conds.push_back({{"name", c.name},
                         {"lhs", c.lhs},
                         {"rhs", c.rhs},
                         {"margin", c.rhs - c.lhs},
                         {"satisfied", c.satisfied}});
    return {{"overall", rep.overall}, {"conditions", conds}};
}

int emit(const json& j, bool ok) {
    std::cout << j.dump(2) << '\n';
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"attachment-graph generators, matchings, Hamilton cycles and experiments"};
    app.require_subcommand(1);

    // ---- gen -----------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a graph and write the edge list");
    GenFlags gen_flags;
    std::string gen_out;
    add_gen_flags(*gen, gen_flags, true);
    gen->add_option("--out", gen_out, "output file")->required();

    // ---- match ---------------------------------------------------------------
    auto* match = app.add_subcommand("match", "maximum matching and certificate");
    std::string match_in;
    bool match_certify = false;
    match->add_option("--in", match_in, "edge-list file")->required();
    match->add_flag("--certify", match_certify, "emit a deficiency certificate if no PM");

    // ---- ham -----------------------------------------------------------------
    auto* ham = app.add_subcommand("ham", "search for a Hamiltonian cycle");
    std::string ham_in;
    std::uint64_t ham_budget = 0;
    std::uint64_t ham_seed = 0;
    ham->add_option("--in", ham_in, "edge-list file")->required();
    ham->add_option("--budget", ham_budget, "rotation budget (0 = 20n + 200)");
    ham->add_option("--seed", ham_seed, "search seed");

    // ---- verify ----------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "check constants or a lemma");
    verify->require_subcommand(1);
    auto* vconst = verify->add_subcommand("constants", "inequalities for a constant set");
    std::string vconst_set;
    vconst->add_option("--set", vconst_set, "a|b|c|d or a JSON file with a custom set")
        ->required();

    auto* vlemma = verify->add_subcommand("lemma", "spot-check one lemma on one graph");
    std::string vl_name, vl_in;
    GenFlags vl_gen;
    struct {
        double A = 10.0, C = 20.0, alpha = 0.05, x = 0.22791, y = 0.020063, d = 0.387967;
        std::uint32_t omega = 0, k_max = 8, k = 0, w = 0, trials = 200;
        int ell = 1;
        std::uint64_t budget = 2000;
    } vl;
    vlemma
        ->add_option("--name", vl_name, "total_weight | expansion | goodold | edge_absence")
        ->check(CLI::IsMember({"total_weight", "expansion", "goodold", "edge_absence"}))
        ->required();
    vlemma->add_option("--in", vl_in, "edge-list file (alternative to --model/--n/...)");
    add_gen_flags(*vlemma, vl_gen, false);
    vlemma->add_option("--A", vl.A, "degree-sum slack factor");
    vlemma->add_option("--omega", vl.omega, "degree-sum grace window (0 = ceil(log2 n))");
    vlemma->add_option("--alpha", vl.alpha, "set-size fraction");
    vlemma->add_option("--ell", vl.ell, "required expansion factor");
    vlemma->add_option("--k-max", vl.k_max, "exhaustive set-size cap");
    vlemma->add_option("--budget", vl.budget, "random candidates for expansion");
    vlemma->add_option("--x", vl.x, "good-vertex future-degree slack");
    vlemma->add_option("--y", vl.y, "tolerated bad fraction of k");
    vlemma->add_option("--d", vl.d, "good-vertex window exponent");
    vlemma->add_option("--k", vl.k, "good-vertex k (0 = alpha*n)");
    vlemma->add_option("--w", vl.w, "edge-absence |W| (0 = n/10)");
    vlemma->add_option("--trials", vl.trials, "edge-absence trials");

    // ---- lowerbound -----------------------------------------------------------
    auto* lb = app.add_subcommand("lowerbound", "lonely-vertex statistics for pa, m = 2");
    std::uint32_t lb_n = 0, lb_trials = 10;
    double lb_c = 0.25;
    std::uint64_t lb_seed = 0;
    lb->add_option("--n", lb_n, "number of vertices")->required();
    lb->add_option("--trials", lb_trials, "independent graphs");
    lb->add_option("--c", lb_c, "old/young cutoff fraction");
    lb->add_option("--seed", lb_seed, "master seed");

    // ---- experiment / report ----------------------------------------------------
    auto* exp = app.add_subcommand("experiment", "run a configured Monte Carlo sweep");
    std::string exp_config, exp_out;
    exp->add_option("--config", exp_config, "config JSON file")->required();
    exp->add_option("--out", exp_out, "output directory (manifest + records + summary)")
        ->required();

    auto* rep = app.add_subcommand("report", "render a persisted experiment");
    std::string rep_in, rep_format = "csv";
    rep->add_option("--in", rep_in, "experiment output directory")->required();
    rep->add_option("--format", rep_format, "csv or md")
        ->check(CLI::IsMember({"csv", "md"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            GenParams p = to_params(gen_flags);
            write_edge_list(generate(p), gen_out);
            return 0;
        }

        if (*match) {
            const AttachGraph g = read_edge_list(match_in);
            return emit(matching_json(simple_view(g), match_certify), true);
        }

        if (*ham) {
            const AttachGraph g = read_edge_list(ham_in);
            const SimpleView sv = simple_view(g);
            const std::uint64_t budget = ham_budget ? ham_budget : 20ull * sv.n() + 200;
            const PosaResult r = posa_search(sv, budget, ham_seed);
            json out{{"hamiltonian", r.cycle.has_value()},
                     {"longest_path_len", r.longest.size()},
                     {"steps_used", r.steps_used}};
            out["cycle"] = r.cycle ? json(r.cycle->sequence) : json(nullptr);
            return emit(out, true);
        }

        if (*vconst) {
            ConstantSet set;
            std::string label = vconst_set;
            if (vconst_set.size() == 1 && vconst_set[0] >= 'a' && vconst_set[0] <= 'd') {
                set = published_set(vconst_set[0]);
            } else {
                std::ifstream in(vconst_set);
                if (!in) throw std::runtime_error("cannot open " + vconst_set);
                json j;
                in >> j;
                set = constant_set_from_json(j);
                label = "custom";
            }
            const ConditionReport report = check_conditions(set);
            json out = condition_report_json(report);
            out["set"] = label;
            out["m"] = set.m;
            out["ell"] = set.ell;
            out["primed"] = set.primed;
            return emit(out, report.overall);
        }

        if (*vlemma) {
            const bool from_file = !vl_in.empty();
            if (vl_name == "edge_absence") {
                if (from_file)
                    throw std::runtime_error(
                        "edge_absence resamples graphs; use --model/--n/--m/--seed");
                const GenParams p = to_params(vl_gen);
                const std::uint32_t wk = vl.w ? vl.w : std::max<std::uint32_t>(1, p.n / 10);
                std::vector<std::uint32_t> w(wk);
                for (std::uint32_t i = 0; i < wk; ++i) w[i] = i + 1;
                const EdgeAbsenceReport r = edge_absence_freq(p, p.n, w, vl.trials);
                const double sigma =
                    std::sqrt(std::max(1e-12, r.exact_uniform * (1 - r.exact_uniform)) /
                              vl.trials);
                const bool ok = p.model == Model::uniform
                                    ? std::abs(r.freq - r.exact_uniform) <= 5 * sigma
                                    : r.freq <= r.bound_past + 5 * sigma;
                return emit(json{{"lemma", vl_name},
                                 {"trials", r.trials},
                                 {"freq", r.freq},
                                 {"exact_uniform", r.exact_uniform},
                                 {"bound_future", r.bound_future},
                                 {"bound_past", r.bound_past},
                                 {"ok", ok}},
                            ok);
            }
            const AttachGraph g =
                from_file ? read_edge_list(vl_in) : generate(to_params(vl_gen));
            if (vl_name == "total_weight") {
                const std::uint32_t omega =
                    vl.omega ? vl.omega
                             : static_cast<std::uint32_t>(
                                   std::ceil(std::log2(std::max(2u, g.n))));
                const WeightReport r =
                    oldest_degree_bound_check(g, vl.A, omega, {1, 10, 100}, 3, g.seed + 1);
                json viols = json::array();
                for (const auto& v : r.violations)
                    viols.push_back(
                        {{"k", v.k}, {"t", v.t}, {"sum", v.sum}, {"bound", v.bound}});
                const bool ok = r.violations.empty();
                return emit(json{{"lemma", vl_name},
                                 {"checks", r.checks},
                                 {"max_ratio", r.max_ratio},
                                 {"violations", viols},
                                 {"ok", ok}},
                            ok);
            }
            if (vl_name == "expansion") {
                const auto bad = expansion_check(simple_view(g), vl.alpha, vl.ell, vl.k_max,
                                                 vl.budget, g.seed + 2);
                const bool ok = !bad.has_value();
                json out{{"lemma", vl_name},
                         {"alpha", vl.alpha},
                         {"ell", vl.ell},
                         {"k_max", vl.k_max},
                         {"ok", ok}};
                out["witness"] = bad ? json(*bad) : json(nullptr);
                return emit(out, ok);
            }
            // goodold
            const std::uint32_t k =
                vl.k ? vl.k
                     : std::max<std::uint32_t>(
                           1, static_cast<std::uint32_t>(vl.alpha * static_cast<double>(g.n)));
            const GoodOldReport r = good_vertices_check(g, vl.x, vl.d, k);
            const double allowance = vl.y * static_cast<double>(k);
            const bool ok = static_cast<double>(r.bad_count) <= allowance;
            return emit(json{{"lemma", vl_name},
                             {"k", k},
                             {"j", r.j},
                             {"threshold", r.threshold},
                             {"bad_count", r.bad_count},
                             {"allowance", allowance},
                             {"ok", ok}},
                        ok);
        }

        if (*lb) {
            json detail = json::array();
            double sa = 0, sb = 0, sc = 0, sd = 0, scherry = 0, siso = 0;
            std::uint32_t witnesses = 0;
            for (std::uint32_t i = 0; i < lb_trials; ++i) {
                const AttachGraph g = generate(
                    {Model::preferential, lb_n, 2, 0, false, derive_seed(lb_seed, i)});
                const LonelyStats st = lonely_stats(g, lb_c);
                const auto h = build_H(g, lb_c);
                const auto cherries = sweet_cherries(g);
                const auto witness = no_pm_certificate(g, lb_c);
                witnesses += witness.has_value();
                sa += st.a_n;
                sb += st.b_n;
                sc += st.c_n;
                sd += st.d_n;
                scherry += static_cast<double>(cherries.size());
                siso += h.isolated_count();
                json row{{"trial", i},
                         {"a_n", st.a_n},
                         {"b_n", st.b_n},
                         {"c_n", st.c_n},
                         {"d_n", st.d_n},
                         {"cherries", cherries.size()},
                         {"isolated", h.isolated_count()}};
                row["deficiency"] = witness ? json(witness->deficiency) : json(nullptr);
                detail.push_back(std::move(row));
            }
            const double t = lb_trials;
            return emit(json{{"n", lb_n},
                             {"c", lb_c},
                             {"trials", lb_trials},
                             {"witness_rate", witnesses / t},
                             {"means",
                              {{"a_n", sa / t},
                               {"b_n", sb / t},
                               {"c_n", sc / t},
                               {"d_n", sd / t},
                               {"cherries", scherry / t},
                               {"isolated", siso / t}}},
                             {"trials_detail", detail}},
                        true);
        }

        if (*exp) {
            std::ifstream in(exp_config);
            if (!in) throw std::runtime_error("cannot open " + exp_config);
            json j;
            in >> j;
            const ExperimentConfig cfg = config_from_json(j);
            const ExperimentResult res = run_experiment(cfg, exp_out);
            std::cerr << "experiment " << res.config_hash << ": " << res.computed
                      << " trials computed, " << res.resumed << " resumed\n";
            std::cout << render_report(exp_out, "md");
            return 0;
        }

        if (*rep) {
            std::cout << render_report(rep_in, rep_format);
            return 0;
        }
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "attachlab: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
