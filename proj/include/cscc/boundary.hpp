#ifndef CSCC_BOUNDARY_HPP
#define CSCC_BOUNDARY_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "cost_model.hpp"
#include "errors.hpp"

namespace cscc {

enum class Treatment { control = 0, treated = 1 };

/// Treatment-conditional positive-outcome probabilities of one instance.
/// t = p11 - p10 is the estimated individual treatment effect.
class ProbabilityPair {
public:
    ProbabilityPair() = default;
    ProbabilityPair(double p11, double p10) : p11_(p11), p10_(p10) {
        if (!(p11 >= 0.0 && p11 <= 1.0) || !(p10 >= 0.0 && p10 <= 1.0))
            throw DataError("InvalidProbability", "probabilities must lie in [0,1], got p11=" +
                                                      std::to_string(p11) +
                                                      " p10=" + std::to_string(p10));
    }

    double p11() const noexcept { return p11_; }
    double p10() const noexcept { return p10_; }
    double t() const noexcept { return p11_ - p10_; }

    friend bool operator==(const ProbabilityPair&, const ProbabilityPair&) = default;

private:
    double p11_ = 0.0;
    double p10_ = 0.0;
};

/// Expected profit of assigning treatment `w` to an instance whose
/// positive-outcome probability under `w` is `p1w`.
inline double expected_profit(const CostBenefitSpec& spec, double p1w, Treatment w) {
    const int j = static_cast<int>(w);
    const NetValueMatrix net = net_matrix(spec);
    return p1w * net.at(1, j) + (1.0 - p1w) * net.at(0, j);
}

/// Expected profit of treating minus expected profit of not treating.
inline double expected_causal_profit(const CostBenefitSpec& spec, const ProbabilityPair& pair) {
    return expected_profit(spec, pair.p11(), Treatment::treated) -
           expected_profit(spec, pair.p10(), Treatment::control);
}

enum class BoundaryMode { cost_sensitive, cost_insensitive };

/// Smallest |denominator| accepted before a cost structure counts as
/// degenerate: relative 1e-12 of the largest net entry, absolute floor 1e-300.
inline bool is_degenerate_denominator(double denom, double magnitude) {
    const double tol = std::max(1e-12 * magnitude, 1e-300);
    return !(std::abs(denom) > tol);
}

/// Linear decision boundary tau*(p11) = gamma + delta * p11 in the (p11, t)
/// plane. In cost-sensitive mode the expected causal profit of a pair equals
/// scale * (t - tau*(p11)); when scale < 0 (`inverted()`), profitable pairs lie
/// below the line rather than above it.
class DecisionBoundary {
public:
    static DecisionBoundary cost_insensitive() { return DecisionBoundary{}; }

    static DecisionBoundary from_spec(const CostBenefitSpec& spec) {
        const NetValueMatrix net = net_matrix(spec);
        const double scale = net.cb10 - net.cb00;
        if (is_degenerate_denominator(scale, net.max_abs()))
            throw DegenerateCostStructure(
                "net benefit of a positive over a negative outcome without treatment "
                "(cb10 - cb00) is zero; the treatment decision has no linear boundary in t");
        DecisionBoundary b;
        b.mode_ = BoundaryMode::cost_sensitive;
        b.net_ = net;
        b.scale_ = scale;
        b.gamma_num_ = net.cb00 - net.cb01;
        b.delta_num_ = accurate_sum({net.cb10, net.cb01, -net.cb11, -net.cb00});
        b.gamma_ = b.gamma_num_ / scale;
        b.delta_ = b.delta_num_ / scale;
        return b;
    }

    BoundaryMode mode() const noexcept { return mode_; }
    double gamma() const noexcept { return gamma_; }
    double delta() const noexcept { return delta_; }
    double scale() const noexcept { return scale_; }
    bool inverted() const noexcept { return scale_ < 0.0; }

    double tau_star(double p11) const noexcept {
        return mode_ == BoundaryMode::cost_insensitive ? 0.0 : (gamma_num_ + delta_num_ * p11) / scale_;
    }

    /// Expected causal profit; in cost-insensitive mode the ITE itself.
    double expected_causal_profit(const ProbabilityPair& pair) const noexcept {
        if (mode_ == BoundaryMode::cost_insensitive) return pair.t();
        // Same grouping as the free expected_causal_profit().
        return (pair.p11() * net_.cb11 + (1.0 - pair.p11()) * net_.cb01) -
               (pair.p10() * net_.cb10 + (1.0 - pair.p10()) * net_.cb00);
    }

    /// Treated iff expected causal profit is strictly positive; pairs on the
    /// boundary stay untreated.
    Treatment classify(const ProbabilityPair& pair) const noexcept {
        return expected_causal_profit(pair) > 0.0 ? Treatment::treated : Treatment::control;
    }

    /// Signed distance from the boundary line to (p11, t).
    double displacement(const ProbabilityPair& pair) const noexcept {
        return (pair.t() - delta_ * pair.p11() - gamma_) / std::sqrt(delta_ * delta_ + 1.0);
    }

    std::optional<NetValueMatrix> net() const {
        if (mode_ == BoundaryMode::cost_insensitive) return std::nullopt;
        return net_;
    }

private:
    DecisionBoundary() = default;

    BoundaryMode mode_ = BoundaryMode::cost_insensitive;
    NetValueMatrix net_{};
    double gamma_ = 0.0;
    double delta_ = 0.0;
    double gamma_num_ = 0.0;
    double delta_num_ = 0.0;
    double scale_ = 1.0;
};

inline DecisionBoundary build_boundary(const CostBenefitSpec& spec) {
    return DecisionBoundary::from_spec(spec);
}

/// Optimal probability threshold of conventional cost-sensitive
/// classification: predict positive when P1 exceeds the returned value.
inline double classification_threshold(const ClassificationCostBenefitMatrix& cb) {
    const double denom = accurate_sum({cb.cb11, cb.cb00, -cb.cb01, -cb.cb10});
    const double mag =
        std::max({std::abs(cb.cb00), std::abs(cb.cb01), std::abs(cb.cb10), std::abs(cb.cb11)});
    if (is_degenerate_denominator(denom, mag))
        throw DegenerateCostStructure("cb11 + cb00 - cb01 - cb10 is zero");
    return (cb.cb00 - cb.cb01) / denom;
}

// Shape of the positive treatment set. Both take the spec in any form and
// reason on its normalized equivalent; they assume b10 > 0 after
// normalization.

/// No feasible (p11, t) is worth treating: c11 >= b11.
inline bool positive_treatment_set_empty(const CostBenefitSpec& spec) {
    return !profitability_condition(spec);
}

/// Some pair with t < 0 is worth treating: c11 < b11 - b10.
inline bool boundary_admits_negative_ite(const CostBenefitSpec& spec) {
    return bonus_condition(spec);
}

// Geometric counterparts: since gamma >= 0, both questions are settled by
// the boundary height at p11 = 1.
inline bool positive_treatment_set_empty_geometric(const CostBenefitSpec& spec) {
    return build_boundary(normalized(spec)).tau_star(1.0) >= 1.0;
}

inline bool boundary_admits_negative_ite_geometric(const CostBenefitSpec& spec) {
    return build_boundary(normalized(spec)).tau_star(1.0) < 0.0;
}

/// (p11, t) lies in the feasible band p11 - 1 <= t <= p11.
inline bool is_feasible(double p11, double t) {
    return p11 >= 0.0 && p11 <= 1.0 && t >= p11 - 1.0 && t <= p11;
}

}  // namespace cscc

#endif  // CSCC_BOUNDARY_HPP
