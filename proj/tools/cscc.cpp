// cscc: command-line front end for cost-sensitive causal classification.
// Exit codes: 0 success, 1 usage or configuration error, 2 data error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cscc.hpp"

namespace fs = std::filesystem;
using namespace cscc;

namespace {

struct Options {
    std::string in, out, config, plan, model;
    std::string schema_treatment = "treatment";
    std::string schema_outcome = "outcome";
    std::string ranker = "ecp";
    std::string scheme = "t";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n;
    std::optional<std::size_t> k_folds;
    double budget = 0.0;
    double lambda = 1.0;
    bool summary = false;
    bool plots = false;
    bool quiet = false;
};

void warn(const Options& o, const std::string& msg) {
    if (!o.quiet) std::cerr << "warning: " << msg << '\n';
}

void ensure_parent(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void write_file(const fs::path& p, const std::string& content) {
    ensure_parent(p);
    std::ofstream f(p, std::ios::binary);
    f << content;
    f.close();
    if (!f) throw DataError("WriteFailed", "cannot write " + p.string());
}

template <class Fn>
void write_with(const fs::path& p, Fn&& fn) {
    std::ostringstream ss;
    fn(ss);
    write_file(p, ss.str());
}

std::string scenario_name(const std::string& config_path) {
    const json j = read_json_file(config_path);
    if (j.is_object() && j.contains("name") && j.at("name").is_string()) return j.at("name").get<std::string>();
    return fs::path(config_path).stem().string();
}

// ---------------------------------------------------------------- generate

int cmd_generate(const Options& o) {
    GeneratorConfig cfg = o.config.empty() ? GeneratorConfig::defaults()
                                           : generator_config_from_json(read_json_file(o.config));
    if (o.n) cfg.n = *o.n;
    if (o.seed) cfg.seed = *o.seed;
    const TrialDataset data = generate_synthetic(cfg);
    write_with(o.out, [&](std::ostream& s) { write_dataset_csv(s, data); });
    if (o.summary) {
        const TrialSummary t = data.summary();
        std::cout << json{{"n", t.n},
                          {"control", t.control},
                          {"treatment", t.treatment},
                          {"control_rate", t.control_rate},
                          {"treatment_rate", t.treatment_rate},
                          {"effect", t.effect}}
                         .dump()
                  << '\n';
    }
    return 0;
}

// --------------------------------------------------------------------- fit

int cmd_fit(const Options& o) {
    const TrialDataset data = ingest_csv(o.in, {o.schema_treatment, o.schema_outcome, {}});
    LogisticOptions opt;
    opt.lambda = o.lambda;
    const CausalModel model = o.scheme == "s" ? fit_s_learner(data, opt) : fit_t_learner(data, opt);
    std::vector<const LogisticModel*> subs;
    if (const auto* t = std::get_if<TLearner>(&model.learner)) subs = {&t->treated, &t->control};
    else subs = {&std::get<SLearner>(model.learner).model};
    for (const LogisticModel* m : subs)
        for (const std::string& w : m->warnings) warn(o, w);
    write_file(o.out, to_json(model, data.feature_names).dump(2) + "\n");
    if (o.summary) {
        json s = {{"scheme", model.scheme()}, {"n", data.size()}, {"features", data.dims()}};
        json iters = json::array();
        for (const LogisticModel* m : subs) iters.push_back(m->iterations);
        s["iterations"] = iters;
        std::cout << s.dump() << '\n';
    }
    return 0;
}

// ------------------------------------------------------------------- score

int cmd_score(const Options& o) {
    const json mj = read_json_file(o.model);
    const CausalModel model = causal_model_from_json(mj);
    const auto names = mj.value("feature_names", std::vector<std::string>{});
    const CsvTable table = read_csv(o.in);
    if (table.rows.empty()) throw EmptyFile(o.in);

    std::vector<ScoredInstance> scores;
    const bool labeled = table.column(o.schema_treatment) && table.column(o.schema_outcome);
    if (labeled) {
        const TrialDataset data = dataset_from_table(table, {o.schema_treatment, o.schema_outcome, names});
        scores = score_labeled(model, data);
    } else {
        std::vector<std::size_t> cols;
        for (const std::string& f : names) cols.push_back(table.require(f));
        if (names.empty())
            for (std::size_t c = 0; c < table.header.size(); ++c)
                if (table.header[c] != "id" && table.header[c] != "gt_p11" && table.header[c] != "gt_p10")
                    cols.push_back(c);
        Matrix x(table.rows.size(), cols.size());
        std::vector<std::string> ids;
        const auto idc = table.column("id");
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            for (std::size_t j = 0; j < cols.size(); ++j) x(r, j) = table.number(r, cols[j]);
            ids.push_back(idc ? table.rows[r][*idc] : std::to_string(r));
        }
        scores = score(model, x, ids);
    }
    write_with(o.out, [&](std::ostream& s) { write_scores_csv(s, scores); });
    if (o.summary) std::cout << json{{"scored", scores.size()}, {"labeled", labeled}}.dump() << '\n';
    return 0;
}

// -------------------------------------------------------------------- rank

DecisionBoundary boundary_for(const Options& o, const std::optional<CostBenefitSpec>& spec) {
    if (!spec) return DecisionBoundary::cost_insensitive();
    if (o.ranker == "ecp") return build_boundary(*spec);
    try {
        return build_boundary(*spec);
    } catch (const DegenerateCostStructure&) {
        warn(o, "cost structure is degenerate; assignments use the cost-insensitive boundary");
        return DecisionBoundary::cost_insensitive();
    }
}

RankedList rank_with(const Options& o, std::span<const ScoredInstance> scores,
                     const std::optional<CostBenefitSpec>& spec) {
    if (o.ranker == "ite") return rank_ite(scores);
    if (!spec) throw ConfigError("MissingConfig", "--ranker ecp requires --config");
    return rank_ecp(scores, *spec);
}

int cmd_rank(const Options& o) {
    std::optional<CostBenefitSpec> spec;
    if (!o.config.empty()) spec = read_cost_spec(o.config);
    const DecisionBoundary boundary = boundary_for(o, spec);
    const auto scores = read_scores_csv(o.in, o.schema_treatment, o.schema_outcome);
    const RankedList ranking = rank_with(o, scores, spec);
    write_with(o.out, [&](std::ostream& s) { write_ranking_csv(s, ranking, scores, boundary); });
    if (o.summary) {
        std::size_t treated = 0;
        for (const auto& s : scores) treated += boundary.classify(s.pair) == Treatment::treated;
        std::cout << json{{"ranker", o.ranker}, {"n", scores.size()}, {"assigned_treatment", treated}}.dump() << '\n';
    }
    return 0;
}

// ------------------------------------------------------------------ select

int cmd_select(const Options& o) {
    if (!(o.budget >= 0.0)) throw ConfigError("InvalidBudget", "--budget must be >= 0");
    const CostBenefitSpec spec = read_cost_spec(o.config);
    const auto scores = read_scores_csv(o.in, o.schema_treatment, o.schema_outcome);
    const RankedList ranking = rank_with(o, scores, spec);
    const BudgetSelection sel = select_under_budget(ranking, scores, spec, o.budget);
    write_with(o.out, [&](std::ostream& s) {
        s << "id,rank,p11,p10,t,expected_causal_profit\n";
        for (std::size_t r = 0; r < sel.count(); ++r) {
            const ScoredInstance& inst = scores[ranking.entries[r].index];
            s << inst.id << ',' << (r + 1) << ',' << format_double(inst.pair.p11()) << ','
              << format_double(inst.pair.p10()) << ',' << format_double(inst.pair.t()) << ','
              << format_double(expected_causal_profit(spec, inst.pair)) << '\n';
        }
    });
    if (o.summary)
        std::cout << json{{"selected", sel.count()},
                          {"expected_positives", sel.expected_positives},
                          {"expected_negatives", sel.expected_negatives},
                          {"expected_spend", sel.expected_spend},
                          {"budget", sel.budget}}
                         .dump()
                  << '\n';
    return 0;
}

// ---------------------------------------------------------------- evaluate

int cmd_evaluate(const Options& o) {
    const CostBenefitSpec spec = read_cost_spec(o.config);
    const std::string scenario = scenario_name(o.config);
    const std::string dataset = fs::path(o.in).stem().string();
    const auto scores = read_scores_csv(o.in, o.schema_treatment, o.schema_outcome);
    const fs::path dir = o.out;
    fs::create_directories(dir);

    std::vector<std::string> rankers;
    if (o.ranker == "both") rankers = {"ite", "ecp"};
    else rankers = {o.ranker};

    std::ostringstream metrics;
    metrics << "dataset,ranker,scenario,qini,ap,mp,eta_star\n";
    std::vector<Series> profit_series, qini_series;
    json summary = json::object();
    for (const std::string& r : rankers) {
        Options ro = o;
        ro.ranker = r;
        const RankedList ranking = rank_with(ro, scores, spec);
        const ProfitCurve pc = profit_curve(scores, ranking, spec);
        const QiniResult q = qini(scores, ranking);
        metrics << dataset << ',' << r << ',' << scenario << ',' << format_double(q.coefficient) << ','
                << format_double(pc.ap) << ',' << format_double(pc.mp) << ',' << format_double(pc.eta_star) << '\n';
        const auto pts = profit_points(pc);
        write_with(dir / ("profit_" + r + ".csv"), [&](std::ostream& s) { write_curve_csv(s, pts); });
        write_with(dir / ("qini_" + r + ".csv"), [&](std::ostream& s) { write_curve_csv(s, q.curve); });
        for (Treatment g : {Treatment::treated, Treatment::control}) {
            const char* gname = g == Treatment::treated ? "treatment" : "control";
            const auto cum = cumulative_positives(scores, ranking, g);
            write_with(dir / ("cumulative_" + std::string(gname) + "_" + r + ".csv"),
                       [&](std::ostream& s) { write_curve_csv(s, cum); });
        }
        profit_series.push_back({r, pts});
        qini_series.push_back({r, q.curve});
        summary[r] = {{"qini", q.coefficient}, {"ap", pc.ap}, {"mp", pc.mp}, {"eta_star", pc.eta_star}};
    }
    write_file(dir / "metrics.csv", metrics.str());

    const auto dt = score_distribution(scores, Treatment::treated);
    const auto dc = score_distribution(scores, Treatment::control);
    write_with(dir / "score_distribution.csv", [&](std::ostream& s) {
        s << "bin_lo,bin_hi,treatment,control\n";
        for (std::size_t b = 0; b < kScoreBins; ++b)
            s << format_double(static_cast<double>(b) / kScoreBins) << ','
              << format_double(static_cast<double>(b + 1) / kScoreBins) << ',' << dt[b] << ',' << dc[b] << '\n';
    });

    if (o.plots) {
        write_file(dir / "profit.svg", emit_svg(profit_series, {"Causal profit", "treated proportion", "profit"}));
        write_file(dir / "qini.svg", emit_svg(qini_series, {"Qini curve", "targeted fraction", "incremental rate"}));
        try {
            write_file(dir / "boundary.svg",
                       emit_boundary_svg(build_boundary(spec), {"Decision boundary", "p11", "t"}));
        } catch (const DegenerateCostStructure&) {
            warn(o, "no boundary plot: cost structure is degenerate");
        }
        std::vector<Series> dist(2);
        dist[0].name = "treatment";
        dist[1].name = "control";
        for (std::size_t b = 0; b < kScoreBins; ++b) {
            const double mid = (static_cast<double>(b) + 0.5) / kScoreBins;
            dist[0].points.push_back({mid, static_cast<double>(dt[b])});
            dist[1].points.push_back({mid, static_cast<double>(dc[b])});
        }
        write_file(dir / "score_distribution.svg", emit_svg(dist, {"Distribution of p11", "p11", "count"}));
    }
    if (o.summary) std::cout << summary.dump() << '\n';
    return 0;
}

// -------------------------------------------------------------- experiment

int cmd_experiment(const Options& o) {
    ExperimentPlan plan = read_plan(o.plan);
    if (o.seed) plan.seed = *o.seed;
    if (o.k_folds) plan.k = *o.k_folds;
    const ExperimentResult res = run_experiment(plan);
    for (const std::string& w : res.warnings) warn(o, w);
    const fs::path dir = o.out;
    fs::create_directories(dir);
    write_with(dir / "results.csv", [&](std::ostream& s) { write_results_csv(s, res.rows); });

    std::optional<RankerComparison> cmp;
    try {
        cmp = compare_rankers(res.rows);
        write_with(dir / "comparison.csv", [&](std::ostream& s) { write_comparison_csv(s, *cmp); });
    } catch (const MissingCounterpart&) {
        warn(o, "comparison.csv skipped: the plan does not run both rankers");
    }

    for (const CellCurves& c : res.curves) {
        const std::string stem = slug(c.scenario) + "_" + c.learner + "_" + c.ranker + "_fold" + std::to_string(c.fold);
        const auto pts = profit_points(c.profit);
        write_with(dir / "curves" / (stem + "_profit.csv"), [&](std::ostream& s) { write_curve_csv(s, pts); });
        write_with(dir / "curves" / (stem + "_qini.csv"), [&](std::ostream& s) { write_curve_csv(s, c.qini.curve); });
    }

    if (o.plots) {
        for (const NamedScenario& sc : plan.scenarios) {
            for (LearnerKind l : plan.learners) {
                std::vector<Series> profit, q;
                for (const CellCurves& c : res.curves) {
                    if (c.scenario != sc.name || c.learner != to_string(l) || c.fold != 1) continue;
                    profit.push_back({c.ranker, profit_points(c.profit)});
                    q.push_back({c.ranker, c.qini.curve});
                }
                if (profit.empty()) continue;
                const std::string stem = slug(sc.name) + "_" + to_string(l);
                write_file(dir / "plots" / (stem + "_profit.svg"),
                           emit_svg(profit, {sc.name + ", " + to_string(l) + ", fold 1", "treated proportion", "profit"}));
                write_file(dir / "plots" / (stem + "_qini.svg"),
                           emit_svg(q, {sc.name + ", " + to_string(l) + ", fold 1", "targeted fraction", "incremental rate"}));
            }
            try {
                write_file(dir / "plots" / (slug(sc.name) + "_boundary.svg"),
                           emit_boundary_svg(build_boundary(sc.spec), {sc.name, "p11", "t"}));
            } catch (const DegenerateCostStructure&) {
                warn(o, "no boundary plot for " + sc.name + ": cost structure is degenerate");
            }
        }
    }

    if (o.summary) {
        json s = {{"rows", res.rows.size()}};
        std::size_t errors = 0;
        for (const ResultRow& r : res.rows) errors += r.fold != "mean" && !r.ok();
        s["error_rows"] = errors;
        if (cmp) s["ap_wins"] = cmp->ap.wins, s["ap_losses"] = cmp->ap.losses, s["ap_ties"] = cmp->ap.ties;
        std::cout << s.dump() << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cost-sensitive causal classification toolkit"};
    app.require_subcommand(1);
    Options o;

    auto add_summary = [&](CLI::App* c) {
        c->add_flag("--summary", o.summary, "Print a one-line JSON summary on stdout");
        c->add_flag("--quiet", o.quiet, "Suppress warnings");
    };
    auto add_schema = [&](CLI::App* c) {
        c->add_option("--schema-treatment", o.schema_treatment, "Treatment column name")->capture_default_str();
        c->add_option("--schema-outcome", o.schema_outcome, "Outcome column name")->capture_default_str();
    };
    auto add_ranker = [&](CLI::App* c, const std::string& def, std::vector<std::string> choices) {
        o.ranker = def;
        c->add_option("--ranker", o.ranker, "Ranking key")->check(CLI::IsMember(choices))->capture_default_str();
    };

    auto* gen = app.add_subcommand("generate", "Draw a synthetic randomized trial");
    gen->add_option("--config", o.config, "Generator config JSON")->check(CLI::ExistingFile);
    gen->add_option("--n", o.n, "Number of instances");
    gen->add_option("--seed", o.seed, "Random seed");
    gen->add_option("--out", o.out, "Output dataset CSV")->required();
    add_summary(gen);

    auto* fit = app.add_subcommand("fit", "Fit a T- or S-learner on a trial dataset");
    fit->add_option("--in", o.in, "Dataset CSV")->required()->check(CLI::ExistingFile);
    fit->add_option("--scheme", o.scheme, "Metalearner")->check(CLI::IsMember({"t", "s"}))->capture_default_str();
    fit->add_option("--lambda", o.lambda, "L2 penalty")->check(CLI::NonNegativeNumber)->capture_default_str();
    fit->add_option("--seed", o.seed, "Unused; fitting is deterministic");
    fit->add_option("--out", o.out, "Output model JSON")->required();
    add_schema(fit);
    add_summary(fit);

    auto* sc = app.add_subcommand("score", "Score a dataset with a fitted model");
    sc->add_option("--model", o.model, "Model JSON")->required()->check(CLI::ExistingFile);
    sc->add_option("--in", o.in, "Dataset CSV")->required()->check(CLI::ExistingFile);
    sc->add_option("--out", o.out, "Output score CSV")->required();
    add_schema(sc);
    add_summary(sc);

    auto* rk = app.add_subcommand("rank", "Rank scored instances");
    rk->add_option("--in", o.in, "Score CSV")->required()->check(CLI::ExistingFile);
    rk->add_option("--config", o.config, "Cost config JSON")->check(CLI::ExistingFile);
    rk->add_option("--out", o.out, "Output ranking CSV")->required();
    add_ranker(rk, "ecp", {"ite", "ecp"});
    add_schema(rk);
    add_summary(rk);

    auto* sel = app.add_subcommand("select", "Select a treatment set under a budget");
    sel->add_option("--in", o.in, "Score CSV")->required()->check(CLI::ExistingFile);
    sel->add_option("--config", o.config, "Cost config JSON")->required()->check(CLI::ExistingFile);
    sel->add_option("--budget", o.budget, "Budget")->required();
    sel->add_option("--out", o.out, "Output selection CSV")->required();
    add_schema(sel);
    add_summary(sel);

    auto* ev = app.add_subcommand("evaluate", "Profit curves, Qini and diagnostics for labeled scores");
    ev->add_option("--in", o.in, "Labeled score CSV")->required()->check(CLI::ExistingFile);
    ev->add_option("--config", o.config, "Cost config JSON")->required()->check(CLI::ExistingFile);
    ev->add_option("--out", o.out, "Output directory")->required();
    ev->add_flag("--plots", o.plots, "Also write SVG plots");
    add_ranker(ev, "both", {"ite", "ecp", "both"});
    add_schema(ev);
    add_summary(ev);

    auto* ex = app.add_subcommand("experiment", "Run a cross-validated experiment plan");
    ex->add_option("--plan", o.plan, "Plan JSON")->required()->check(CLI::ExistingFile);
    ex->add_option("--out", o.out, "Output directory")->required();
    ex->add_option("--seed", o.seed, "Override the plan seed");
    ex->add_option("--k-folds", o.k_folds, "Override the fold count");
    ex->add_flag("--plots", o.plots, "Also write SVG plots");
    add_summary(ex);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    // --ranker is shared by several subcommands, each with its own default.
    if (sel->parsed()) o.ranker = "ecp";
    if (rk->parsed() && rk->count("--ranker") == 0) o.ranker = "ecp";
    if (ev->parsed() && ev->count("--ranker") == 0) o.ranker = "both";

    try {
        if (gen->parsed()) return cmd_generate(o);
        if (fit->parsed()) return cmd_fit(o);
        if (sc->parsed()) return cmd_score(o);
        if (rk->parsed()) return cmd_rank(o);
        if (sel->parsed()) return cmd_select(o);
        if (ev->parsed()) return cmd_evaluate(o);
        if (ex->parsed()) return cmd_experiment(o);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
