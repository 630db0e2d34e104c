#ifndef CSCC_DATASET_HPP
#define CSCC_DATASET_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "boundary.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "rng.hpp"

namespace cscc {

/// Group sizes and positive rates of a trial.
struct TrialSummary {
    std::size_t n = 0;
    std::size_t control = 0;
    std::size_t treatment = 0;
    double control_rate = 0.0;
    double treatment_rate = 0.0;
    double effect = 0.0;  // treatment_rate - control_rate
};

/// Randomized trial: features, treatment indicator and binary outcome per
/// instance. Synthetic data also carries the true probability pair.
struct TrialDataset {
    std::vector<std::string> ids;
    std::vector<std::string> feature_names;
    Matrix features;
    std::vector<int> treatment;
    std::vector<int> outcome;
    std::optional<std::vector<ProbabilityPair>> truth;

    std::size_t size() const noexcept { return treatment.size(); }
    std::size_t dims() const noexcept { return features.cols(); }

    TrialSummary summary() const {
        TrialSummary s;
        s.n = size();
        std::size_t pos_c = 0, pos_t = 0;
        for (std::size_t i = 0; i < size(); ++i) {
            if (treatment[i] == 1) {
                ++s.treatment;
                pos_t += static_cast<std::size_t>(outcome[i]);
            } else {
                ++s.control;
                pos_c += static_cast<std::size_t>(outcome[i]);
            }
        }
        if (s.control > 0) s.control_rate = static_cast<double>(pos_c) / static_cast<double>(s.control);
        if (s.treatment > 0)
            s.treatment_rate = static_cast<double>(pos_t) / static_cast<double>(s.treatment);
        s.effect = s.treatment_rate - s.control_rate;
        return s;
    }

    TrialDataset subset(std::span<const std::size_t> idx) const {
        TrialDataset out;
        out.feature_names = feature_names;
        out.features = features.select_rows(idx);
        out.ids.reserve(idx.size());
        out.treatment.reserve(idx.size());
        out.outcome.reserve(idx.size());
        if (truth) out.truth.emplace().reserve(idx.size());
        for (std::size_t i : idx) {
            out.ids.push_back(ids[i]);
            out.treatment.push_back(treatment[i]);
            out.outcome.push_back(outcome[i]);
            if (truth) out.truth->push_back((*truth)[i]);
        }
        return out;
    }

    /// Stratum of instance i: 2 * treatment + outcome.
    int stratum(std::size_t i) const { return 2 * treatment[i] + outcome[i]; }
};

inline double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

inline double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

/// Synthetic randomized trial with known probabilities. Features are i.i.d.
/// standard normal, laid out as base, uplift, then noise columns:
///   base   = base_scale   / sqrt(d_base)   * sum of base features
///   uplift = uplift_slope / sqrt(d_uplift) * sum of uplift features
///   p10 = sigmoid(intercept + base)
///   p11 = sigmoid(intercept + base + effect_scale * softplus(uplift))
/// so every treatment effect is nonnegative. Treatment is Bernoulli with
/// `treatment_fraction`, independent of the features.
struct GeneratorConfig {
    std::size_t n = 10000;
    std::size_t d_base = 5;
    std::size_t d_uplift = 11;
    std::size_t d_noise = 0;
    double intercept = -0.0544;
    double base_scale = 1.5;
    double uplift_slope = 1.5;
    double effect_scale = 0.5028;
    double treatment_fraction = 0.5;
    std::uint64_t seed = 20210601;

    /// 16 features (5 base, 11 uplift), equal groups, with intercept and
    /// effect scale calibrated to control/treatment positive rates of
    /// 0.49/0.57. The calibration is reproduced by tools/calibrate_generator.
    static GeneratorConfig defaults() { return GeneratorConfig{}; }

    void check() const {
        if (!(treatment_fraction > 0.0 && treatment_fraction < 1.0))
            throw ConfigError("InvalidGeneratorConfig", "treatment_fraction must lie in (0,1)");
        if (!std::isfinite(intercept) || !std::isfinite(base_scale) ||
            !std::isfinite(uplift_slope) || !std::isfinite(effect_scale))
            throw ConfigError("InvalidGeneratorConfig", "weights must be finite");
    }
};

/// True probability pair for one feature row under `cfg`.
inline ProbabilityPair generator_truth(const GeneratorConfig& cfg, std::span<const double> x) {
    double base = 0.0;
    for (std::size_t j = 0; j < cfg.d_base; ++j) base += x[j];
    if (cfg.d_base > 0) base *= cfg.base_scale / std::sqrt(static_cast<double>(cfg.d_base));
    double up = 0.0;
    for (std::size_t j = 0; j < cfg.d_uplift; ++j) up += x[cfg.d_base + j];
    if (cfg.d_uplift > 0) up *= cfg.uplift_slope / std::sqrt(static_cast<double>(cfg.d_uplift));
    const double logit0 = cfg.intercept + base;
    const double p10 = sigmoid(logit0);
    const double p11 = std::max(p10, sigmoid(logit0 + cfg.effect_scale * softplus(up)));
    return {p11, p10};
}

inline TrialDataset generate_synthetic(const GeneratorConfig& cfg) {
    cfg.check();
    const std::size_t d = cfg.d_base + cfg.d_uplift + cfg.d_noise;
    TrialDataset data;
    for (std::size_t j = 0; j < cfg.d_base; ++j) data.feature_names.push_back("base_" + std::to_string(j + 1));
    for (std::size_t j = 0; j < cfg.d_uplift; ++j)
        data.feature_names.push_back("uplift_" + std::to_string(j + 1));
    for (std::size_t j = 0; j < cfg.d_noise; ++j) data.feature_names.push_back("noise_" + std::to_string(j + 1));
    data.features = Matrix(cfg.n, d);
    data.ids.reserve(cfg.n);
    data.treatment.reserve(cfg.n);
    data.outcome.reserve(cfg.n);
    data.truth.emplace().reserve(cfg.n);

    SplitMix64 rng(cfg.seed);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        auto x = data.features.row(i);
        for (std::size_t j = 0; j < d; ++j) x[j] = rng.normal();
        const ProbabilityPair truth = generator_truth(cfg, x);
        const int w = rng.bernoulli(cfg.treatment_fraction) ? 1 : 0;
        const double p = w == 1 ? truth.p11() : truth.p10();
        const int y = rng.bernoulli(p) ? 1 : 0;
        data.ids.push_back(std::to_string(i));
        data.treatment.push_back(w);
        data.outcome.push_back(y);
        data.truth->push_back(truth);
    }
    return data;
}

struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Stratified k-fold split on (treatment, outcome). Each stratum is shuffled
/// and dealt round-robin, continuing the deal across strata so fold sizes
/// differ by at most one. Empty strata are allowed; a non-empty stratum with
/// fewer than k members is an error.
inline std::vector<Fold> kfold_split(const TrialDataset& data, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("InvalidFoldCount", "k must be at least 2");
    std::array<std::vector<std::size_t>, 4> strata;
    for (std::size_t i = 0; i < data.size(); ++i) strata[static_cast<std::size_t>(data.stratum(i))].push_back(i);
    for (std::size_t s = 0; s < 4; ++s)
        if (!strata[s].empty() && strata[s].size() < k)
            throw StratumTooSmall("stratum (treatment=" + std::to_string(s / 2) + ", outcome=" +
                                  std::to_string(s % 2) + ") has " + std::to_string(strata[s].size()) +
                                  " members, fewer than k=" + std::to_string(k));

    SplitMix64 rng(seed);
    std::vector<std::size_t> fold_of(data.size());
    std::size_t deal = 0;
    for (auto& members : strata) {
        rng.shuffle(members);
        for (std::size_t i : members) fold_of[i] = deal++ % k;
    }
    std::vector<Fold> folds(k);
    for (std::size_t i = 0; i < data.size(); ++i)
        for (std::size_t f = 0; f < k; ++f) (fold_of[i] == f ? folds[f].test : folds[f].train).push_back(i);
    return folds;
}

/// Random subset keeping the (treatment, outcome) mix. The total is
/// round(fraction * n); per-stratum quotas are apportioned by largest
/// remainder so each stays within one instance of its exact share. Rows
/// keep their original order.
inline TrialDataset stratified_subsample(const TrialDataset& data, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw ConfigError("InvalidFraction", "fraction must lie in (0,1]");
    std::array<std::vector<std::size_t>, 4> strata;
    for (std::size_t i = 0; i < data.size(); ++i) strata[static_cast<std::size_t>(data.stratum(i))].push_back(i);

    std::array<std::size_t, 4> quota{};
    std::array<double, 4> remainder{};
    std::size_t assigned = 0;
    for (std::size_t s = 0; s < 4; ++s) {
        const double exact = fraction * static_cast<double>(strata[s].size());
        quota[s] = static_cast<std::size_t>(std::floor(exact));
        remainder[s] = exact - static_cast<double>(quota[s]);
        assigned += quota[s];
    }
    const auto target = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(data.size())));
    std::array<std::size_t, 4> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t s : order) {
        if (assigned >= target) break;
        if (quota[s] < strata[s].size() && remainder[s] > 0.0) {
            ++quota[s];
            ++assigned;
        }
    }

    SplitMix64 rng(seed);
    std::vector<std::size_t> keep;
    keep.reserve(target);
    for (std::size_t s = 0; s < 4; ++s) {
        rng.shuffle(strata[s]);
        keep.insert(keep.end(), strata[s].begin(),
                    strata[s].begin() + static_cast<std::ptrdiff_t>(quota[s]));
    }
    std::sort(keep.begin(), keep.end());
    return data.subset(keep);
}

}  // namespace cscc

#endif  // CSCC_DATASET_HPP
