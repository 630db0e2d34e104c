// Calibrates the synthetic generator's intercept and effect scale so that the
// population positive rates are 0.49 (control) and 0.57 (treatment).
// Rates are averaged over the true probabilities of a large fixed sample, so
// the bisection target is smooth and the result reproducible.

#include <cstdio>
#include <vector>

#include "cscc/dataset.hpp"

namespace {

constexpr std::size_t kSample = 400000;
constexpr double kControlRate = 0.49;
constexpr double kTreatmentRate = 0.57;

struct Rates {
    double control = 0.0;
    double treatment = 0.0;
};

Rates population_rates(const cscc::GeneratorConfig& cfg, const cscc::Matrix& x) {
    Rates r;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const cscc::ProbabilityPair p = cscc::generator_truth(cfg, x.row(i));
        r.control += p.p10();
        r.treatment += p.p11();
    }
    r.control /= static_cast<double>(x.rows());
    r.treatment /= static_cast<double>(x.rows());
    return r;
}

template <class F>
double bisect(double lo, double hi, F&& f) {
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

int main() {
    cscc::GeneratorConfig cfg = cscc::GeneratorConfig::defaults();
    const std::size_t d = cfg.d_base + cfg.d_uplift + cfg.d_noise;
    cscc::Matrix x(kSample, d);
    cscc::SplitMix64 rng(cscc::derive_seed(cfg.seed, "calibration"));
    for (std::size_t i = 0; i < kSample; ++i)
        for (std::size_t j = 0; j < d; ++j) x(i, j) = rng.normal();

    // The control rate depends on the intercept only.
    cfg.intercept = bisect(-5.0, 5.0, [&](double b0) {
        cfg.intercept = b0;
        return population_rates(cfg, x).control - kControlRate;
    });
    cfg.effect_scale = bisect(0.0, 10.0, [&](double e) {
        cfg.effect_scale = e;
        return population_rates(cfg, x).treatment - kTreatmentRate;
    });

    const Rates r = population_rates(cfg, x);
    std::printf("intercept    = %.4f\n", cfg.intercept);
    std::printf("effect_scale = %.4f\n", cfg.effect_scale);
    std::printf("rates        = %.4f / %.4f\n", r.control, r.treatment);
    return 0;
}
