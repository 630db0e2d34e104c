#ifndef CSCC_METALEARNERS_HPP
#define CSCC_METALEARNERS_HPP

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "boundary.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "logistic.hpp"
#include "ranking.hpp"

namespace cscc {

/// Separate outcome models for the treatment and the control group.
struct TLearner {
    LogisticModel treated;
    LogisticModel control;
};

/// One outcome model over [x, w, w * x].
struct SLearner {
    LogisticModel model;
};

struct CausalModel {
    std::variant<TLearner, SLearner> learner;
    std::size_t input_dims = 0;

    const char* scheme() const { return std::holds_alternative<TLearner>(learner) ? "t" : "s"; }
};

namespace detail {

inline void split_groups(const TrialDataset& data, std::vector<std::size_t>& treated,
                         std::vector<std::size_t>& control) {
    for (std::size_t i = 0; i < data.size(); ++i) (data.treatment[i] == 1 ? treated : control).push_back(i);
    if (treated.empty()) throw EmptyGroup("treatment group is empty");
    if (control.empty()) throw EmptyGroup("control group is empty");
}

inline void augment_row(std::span<const double> x, double w, std::span<double> out) {
    const std::size_t d = x.size();
    for (std::size_t j = 0; j < d; ++j) {
        out[j] = x[j];
        out[d + 1 + j] = w * x[j];
    }
    out[d] = w;
}

inline Matrix augment(const TrialDataset& data) {
    const std::size_t d = data.dims();
    Matrix out(data.size(), 2 * d + 1);
    for (std::size_t i = 0; i < data.size(); ++i)
        augment_row(data.features.row(i), static_cast<double>(data.treatment[i]), out.row(i));
    return out;
}

}  // namespace detail

inline CausalModel fit_t_learner(const TrialDataset& data, const LogisticOptions& opt = {}) {
    std::vector<std::size_t> treated, control;
    detail::split_groups(data, treated, control);
    auto fit_group = [&](const std::vector<std::size_t>& idx) {
        const Matrix x = data.features.select_rows(idx);
        std::vector<int> y;
        y.reserve(idx.size());
        for (std::size_t i : idx) y.push_back(data.outcome[i]);
        return fit_logistic(x, y, opt);
    };
    CausalModel m;
    m.input_dims = data.dims();
    m.learner = TLearner{fit_group(treated), fit_group(control)};
    return m;
}

inline CausalModel fit_s_learner(const TrialDataset& data, const LogisticOptions& opt = {}) {
    std::vector<std::size_t> treated, control;
    detail::split_groups(data, treated, control);
    CausalModel m;
    m.input_dims = data.dims();
    m.learner = SLearner{fit_logistic(detail::augment(data), data.outcome, opt)};
    return m;
}

/// (p11, p10) for one feature row.
inline ProbabilityPair predict_pair(const CausalModel& model, std::span<const double> x) {
    if (x.size() != model.input_dims)
        throw DimensionMismatch("model expects " + std::to_string(model.input_dims) + " features, got " +
                                std::to_string(x.size()));
    if (const auto* t = std::get_if<TLearner>(&model.learner))
        return {t->treated.predict(x), t->control.predict(x)};
    const auto& s = std::get<SLearner>(model.learner);
    std::vector<double> row(2 * x.size() + 1);
    detail::augment_row(x, 1.0, row);
    const double p11 = s.model.predict(row);
    detail::augment_row(x, 0.0, row);
    return {p11, s.model.predict(row)};
}

/// Scores every row of `x`; ids default to row numbers.
inline std::vector<ScoredInstance> score(const CausalModel& model, const Matrix& x,
                                         std::span<const std::string> ids = {}) {
    if (x.cols() != model.input_dims)
        throw DimensionMismatch("model expects " + std::to_string(model.input_dims) + " features, got " +
                                std::to_string(x.cols()));
    if (!ids.empty() && ids.size() != x.rows())
        throw DimensionMismatch(std::to_string(ids.size()) + " ids for " + std::to_string(x.rows()) + " rows");
    std::vector<ScoredInstance> out;
    out.reserve(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i)
        out.push_back({ids.empty() ? std::to_string(i) : ids[i], predict_pair(model, x.row(i)), {}, {}});
    return out;
}

/// Scores a trial and attaches its group and outcome labels.
inline std::vector<ScoredInstance> score_labeled(const CausalModel& model, const TrialDataset& data) {
    std::vector<ScoredInstance> out = score(model, data.features, data.ids);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].group = data.treatment[i] == 1 ? Treatment::treated : Treatment::control;
        out[i].outcome = data.outcome[i];
    }
    return out;
}

/// Labeled instances carrying the generator's true probabilities.
inline std::vector<ScoredInstance> truth_labeled(const TrialDataset& data) {
    if (!data.truth) throw DataError("MissingGroundTruth", "dataset has no ground-truth probabilities");
    std::vector<ScoredInstance> out;
    out.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        out.push_back({data.ids[i], (*data.truth)[i],
                       data.treatment[i] == 1 ? Treatment::treated : Treatment::control, data.outcome[i]});
    return out;
}

}  // namespace cscc

#endif  // CSCC_METALEARNERS_HPP
