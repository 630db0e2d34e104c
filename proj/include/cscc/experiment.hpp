#ifndef CSCC_EXPERIMENT_HPP
#define CSCC_EXPERIMENT_HPP

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "cost_model.hpp"
#include "csv.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "evaluation.hpp"
#include "json_io.hpp"
#include "logistic.hpp"
#include "metalearners.hpp"
#include "ranking.hpp"

namespace cscc {

struct NamedScenario {
    std::string name;
    CostBenefitSpec spec;
};

inline std::vector<NamedScenario> default_scenarios() {
    return {{"b11>b10", scenario_treated_bonus()}, {"b11<b10", scenario_control_bonus()}};
}

enum class LearnerKind { t, s, oracle };

inline const char* to_string(LearnerKind k) {
    switch (k) {
        case LearnerKind::t: return "t";
        case LearnerKind::s: return "s";
        case LearnerKind::oracle: return "oracle";
    }
    return "?";
}

inline LearnerKind parse_learner(const std::string& s) {
    if (s == "t") return LearnerKind::t;
    if (s == "s") return LearnerKind::s;
    if (s == "oracle") return LearnerKind::oracle;
    throw ConfigError("InvalidValue", "unknown learner \"" + s + "\" (expected t, s or oracle)");
}

inline RankerKind parse_ranker(const std::string& s) {
    if (s == "ite") return RankerKind::ite;
    if (s == "ecp") return RankerKind::ecp;
    throw ConfigError("InvalidValue", "unknown ranker \"" + s + "\" (expected ite or ecp)");
}

/// Either a synthetic generator config or a CSV file with a column schema.
/// Synthetic data is drawn with a seed derived from the plan seed.
struct DatasetSource {
    std::string name = "synthetic";
    std::optional<GeneratorConfig> synthetic = GeneratorConfig::defaults();
    std::string csv_path;
    DatasetSchema schema;
    std::optional<double> subsample;
};

struct ExperimentPlan {
    DatasetSource dataset;
    std::vector<NamedScenario> scenarios = default_scenarios();
    std::vector<LearnerKind> learners{LearnerKind::t, LearnerKind::s};
    std::vector<RankerKind> rankers{RankerKind::ite, RankerKind::ecp};
    std::size_t k = 5;
    std::uint64_t seed = 20210601;
    LogisticOptions logistic;

    void check() const {
        if (scenarios.empty()) throw ConfigError("InvalidPlan", "scenario list is empty");
        if (learners.empty()) throw ConfigError("InvalidPlan", "learner list is empty");
        if (rankers.empty()) throw ConfigError("InvalidPlan", "ranker list is empty");
        if (k < 2) throw ConfigError("InvalidPlan", "k must be at least 2");
        for (RankerKind r : rankers)
            if (r == RankerKind::displacement)
                throw ConfigError("InvalidPlan", "experiment rankers are ite and ecp");
        if (!dataset.synthetic && dataset.csv_path.empty())
            throw ConfigError("InvalidPlan", "dataset needs a synthetic config or a csv path");
    }
};

/// Plan JSON. Relative CSV paths resolve against `base_dir`.
inline ExperimentPlan plan_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
    ExperimentPlan plan;
    try {
        if (j.contains("dataset")) {
            const json& d = j.at("dataset");
            DatasetSource src;
            src.name = d.value("name", std::string("dataset"));
            if (d.contains("csv")) {
                src.synthetic.reset();
                std::filesystem::path p = d.at("csv").get<std::string>();
                if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
                src.csv_path = p.string();
                src.schema.treatment = d.value("treatment", std::string("treatment"));
                src.schema.outcome = d.value("outcome", std::string("outcome"));
                src.schema.features = d.value("features", std::vector<std::string>{});
            } else {
                src.name = d.value("name", std::string("synthetic"));
                src.synthetic = generator_config_from_json(d.value("synthetic", json::object()));
            }
            if (d.contains("subsample")) src.subsample = d.at("subsample").get<double>();
            plan.dataset = src;
        }
        if (j.contains("scenarios")) {
            plan.scenarios.clear();
            for (const json& s : j.at("scenarios"))
                plan.scenarios.push_back({s.at("name").get<std::string>(), cost_spec_from_json(s)});
        }
        if (j.contains("learners")) {
            plan.learners.clear();
            for (const json& s : j.at("learners")) plan.learners.push_back(parse_learner(s.get<std::string>()));
        }
        if (j.contains("rankers")) {
            plan.rankers.clear();
            for (const json& s : j.at("rankers")) plan.rankers.push_back(parse_ranker(s.get<std::string>()));
        }
        if (j.contains("k")) plan.k = j.at("k").get<std::size_t>();
        if (j.contains("seed")) plan.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("lambda")) plan.logistic.lambda = j.at("lambda").get<double>();
        if (j.contains("tol")) plan.logistic.tol = j.at("tol").get<double>();
        if (j.contains("max_iter")) plan.logistic.max_iter = j.at("max_iter").get<int>();
    } catch (const json::exception& e) {
        throw ConfigError("InvalidPlan", e.what());
    }
    for (const NamedScenario& s : plan.scenarios)
        if (!validate(s.spec).empty()) throw ConfigError("InvalidCostSpec", "scenario \"" + s.name + "\" is invalid");
    plan.check();
    return plan;
}

inline ExperimentPlan read_plan(const std::string& path) {
    return plan_from_json(read_json_file(path), std::filesystem::path(path).parent_path());
}

struct ResultRow {
    std::string dataset;
    std::string scenario;
    std::string learner;
    std::string ranker;
    std::string fold;  // "1".."k" or "mean"
    double qini = 0.0;
    double ap = 0.0;
    double mp = 0.0;
    double eta_star = 0.0;
    std::string error;  // empty on success

    bool ok() const { return error.empty(); }
};

/// Curves of one evaluated cell on one fold.
struct CellCurves {
    std::string scenario;
    std::string learner;
    std::string ranker;
    std::size_t fold = 0;
    ProfitCurve profit;
    QiniResult qini;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    std::vector<CellCurves> curves;
    std::vector<std::string> warnings;
};

inline TrialDataset load_dataset(const DatasetSource& src, std::uint64_t master_seed) {
    TrialDataset data;
    if (src.synthetic) {
        GeneratorConfig cfg = *src.synthetic;
        cfg.seed = derive_seed(master_seed, "data");
        data = generate_synthetic(cfg);
    } else {
        data = ingest_csv(src.csv_path, src.schema);
    }
    if (src.subsample) data = stratified_subsample(data, *src.subsample, derive_seed(master_seed, "subsample"));
    return data;
}

/// Cross-validated evaluation of every scenario x learner x ranker cell.
/// Per-cell failures become error rows; the run continues.
inline ExperimentResult run_experiment(const ExperimentPlan& plan, const TrialDataset& data) {
    plan.check();
    const std::vector<Fold> folds = kfold_split(data, plan.k, derive_seed(plan.seed, "folds"));

    // rows[scenario][learner][ranker][fold]
    const std::size_t ns = plan.scenarios.size(), nl = plan.learners.size(), nr = plan.rankers.size();
    std::vector<ResultRow> cells(ns * nl * nr * plan.k);
    auto cell = [&](std::size_t s, std::size_t l, std::size_t r, std::size_t f) -> ResultRow& {
        return cells[((s * nl + l) * nr + r) * plan.k + f];
    };
    ExperimentResult result;

    for (std::size_t f = 0; f < folds.size(); ++f) {
        const TrialDataset train = data.subset(folds[f].train);
        const TrialDataset test = data.subset(folds[f].test);
        for (std::size_t l = 0; l < nl; ++l) {
            std::vector<ScoredInstance> scored;
            std::string fit_error;
            try {
                switch (plan.learners[l]) {
                    case LearnerKind::oracle: scored = truth_labeled(test); break;
                    case LearnerKind::t: {
                        const CausalModel m = fit_t_learner(train, plan.logistic);
                        for (const LogisticModel* sub : {&std::get<TLearner>(m.learner).treated,
                                                         &std::get<TLearner>(m.learner).control})
                            for (const std::string& w : sub->warnings)
                                result.warnings.push_back("fold " + std::to_string(f + 1) + ", t: " + w);
                        scored = score_labeled(m, test);
                        break;
                    }
                    case LearnerKind::s: {
                        const CausalModel m = fit_s_learner(train, plan.logistic);
                        for (const std::string& w : std::get<SLearner>(m.learner).model.warnings)
                            result.warnings.push_back("fold " + std::to_string(f + 1) + ", s: " + w);
                        scored = score_labeled(m, test);
                        break;
                    }
                }
            } catch (const Error& e) {
                fit_error = e.what();
            }
            for (std::size_t s = 0; s < ns; ++s) {
                for (std::size_t r = 0; r < nr; ++r) {
                    ResultRow& row = cell(s, l, r, f);
                    row.dataset = plan.dataset.name;
                    row.scenario = plan.scenarios[s].name;
                    row.learner = to_string(plan.learners[l]);
                    row.ranker = to_string(plan.rankers[r]);
                    row.fold = std::to_string(f + 1);
                    row.error = fit_error;
                    if (!fit_error.empty()) continue;
                    try {
                        const RankedList ranking = plan.rankers[r] == RankerKind::ite
                                                       ? rank_ite(scored)
                                                       : rank_ecp(scored, plan.scenarios[s].spec);
                        CellCurves c{row.scenario, row.learner, row.ranker, f + 1,
                                     profit_curve(scored, ranking, plan.scenarios[s].spec), qini(scored, ranking)};
                        row.qini = c.qini.coefficient;
                        row.ap = c.profit.ap;
                        row.mp = c.profit.mp;
                        row.eta_star = c.profit.eta_star;
                        result.curves.push_back(std::move(c));
                    } catch (const Error& e) {
                        row.error = e.what();
                    }
                }
            }
        }
    }

    for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t l = 0; l < nl; ++l) {
            for (std::size_t r = 0; r < nr; ++r) {
                ResultRow mean = cell(s, l, r, 0);
                mean.fold = "mean";
                mean.qini = mean.ap = mean.mp = mean.eta_star = 0.0;
                mean.error.clear();
                std::size_t good = 0;
                for (std::size_t f = 0; f < plan.k; ++f) {
                    const ResultRow& row = cell(s, l, r, f);
                    result.rows.push_back(row);
                    if (!row.ok()) continue;
                    ++good;
                    mean.qini += row.qini;
                    mean.ap += row.ap;
                    mean.mp += row.mp;
                    mean.eta_star += row.eta_star;
                }
                if (good == 0) {
                    mean.error = "NoSuccessfulFolds: every fold failed";
                } else {
                    const double g = static_cast<double>(good);
                    mean.qini /= g;
                    mean.ap /= g;
                    mean.mp /= g;
                    mean.eta_star /= g;
                    if (good < plan.k)
                        mean.error = "PartialMean: " + std::to_string(good) + " of " + std::to_string(plan.k) +
                                     " folds succeeded";
                }
                result.rows.push_back(mean);
            }
        }
    }
    return result;
}

inline ExperimentResult run_experiment(const ExperimentPlan& plan) {
    plan.check();
    return run_experiment(plan, load_dataset(plan.dataset, plan.seed));
}

/// ECP minus ITE for one (dataset, scenario, learner, fold) cell.
struct RankerDelta {
    std::string dataset;
    std::string scenario;
    std::string learner;
    std::string fold;
    double qini = 0.0;
    double ap = 0.0;
    double mp = 0.0;
    double eta_star = 0.0;
    bool valid = true;  // false when either side is an error row
};

struct WinLoss {
    std::size_t wins = 0;
    std::size_t losses = 0;
    std::size_t ties = 0;

    void add(double d) { (d > 0.0 ? wins : d < 0.0 ? losses : ties)++; }
};

struct RankerComparison {
    std::vector<RankerDelta> deltas;
    // Tallied over per-fold deltas only (mean rows excluded).
    WinLoss qini, ap, mp;
};

inline RankerComparison compare_rankers(const std::vector<ResultRow>& rows) {
    using Key = std::tuple<std::string, std::string, std::string, std::string>;
    std::map<Key, std::pair<const ResultRow*, const ResultRow*>> cells;  // (ite, ecp)
    std::vector<Key> order;
    for (const ResultRow& row : rows) {
        Key key{row.dataset, row.scenario, row.learner, row.fold};
        auto [it, inserted] = cells.try_emplace(key, nullptr, nullptr);
        if (inserted) order.push_back(key);
        if (row.ranker == "ite") it->second.first = &row;
        else if (row.ranker == "ecp") it->second.second = &row;
    }
    RankerComparison out;
    for (const Key& key : order) {
        const auto [ite, ecp] = cells.at(key);
        if (!ite || !ecp)
            throw MissingCounterpart("cell (" + std::get<0>(key) + ", " + std::get<1>(key) + ", " +
                                     std::get<2>(key) + ", fold " + std::get<3>(key) + ") lacks the " +
                                     (ite ? "ecp" : "ite") + " row");
        RankerDelta d{std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key)};
        d.valid = ite->ok() && ecp->ok();
        if (d.valid) {
            d.qini = ecp->qini - ite->qini;
            d.ap = ecp->ap - ite->ap;
            d.mp = ecp->mp - ite->mp;
            d.eta_star = ecp->eta_star - ite->eta_star;
            if (d.fold != "mean") {
                out.qini.add(d.qini);
                out.ap.add(d.ap);
                out.mp.add(d.mp);
            }
        }
        out.deltas.push_back(d);
    }
    return out;
}

/// Mean row of a cell, or nullptr.
inline const ResultRow* find_mean(const std::vector<ResultRow>& rows, const std::string& scenario,
                                  const std::string& learner, const std::string& ranker) {
    for (const ResultRow& r : rows)
        if (r.scenario == scenario && r.learner == learner && r.ranker == ranker && r.fold == "mean") return &r;
    return nullptr;
}

inline void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << "dataset,scenario,learner,ranker,fold,qini,ap,mp,eta_star,error\n";
    for (const ResultRow& r : rows) {
        out << r.dataset << ',' << r.scenario << ',' << r.learner << ',' << r.ranker << ',' << r.fold << ',';
        if (r.fold == "mean" ? !r.error.empty() && r.error.rfind("PartialMean", 0) != 0 : !r.ok())
            out << ",,,,";
        else
            out << format_double(r.qini) << ',' << format_double(r.ap) << ',' << format_double(r.mp) << ','
                << format_double(r.eta_star) << ',';
        std::string err = r.error;
        for (char& c : err)
            if (c == ',' || c == '\n') c = ';';
        out << err << '\n';
    }
}

inline void write_comparison_csv(std::ostream& out, const RankerComparison& cmp) {
    out << "dataset,scenario,learner,fold,delta_qini,delta_ap,delta_mp,delta_eta_star,status\n";
    for (const RankerDelta& d : cmp.deltas) {
        out << d.dataset << ',' << d.scenario << ',' << d.learner << ',' << d.fold << ',';
        if (d.valid)
            out << format_double(d.qini) << ',' << format_double(d.ap) << ',' << format_double(d.mp) << ','
                << format_double(d.eta_star) << ",ok\n";
        else
            out << ",,,,error\n";
    }
}

/// File-name-safe form of a scenario or cell name.
inline std::string slug(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') out += c;
        else if (c == '>') out += "_gt_";
        else if (c == '<') out += "_lt_";
        else if (c == '=') out += "_eq_";
        else out += '_';
    }
    return out;
}

}  // namespace cscc

#endif  // CSCC_EXPERIMENT_HPP
