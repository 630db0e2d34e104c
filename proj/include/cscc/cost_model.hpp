#ifndef CSCC_COST_MODEL_HPP
#define CSCC_COST_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <string>
#include <vector>

namespace cscc {

// Indices throughout are (outcome, treatment): b10 is the benefit of a
// positive outcome under the negative treatment.

/// Benefit of each outcome given the applied treatment. Entries are >= 0.
struct OutcomeBenefitMatrix {
    double b00 = 0.0;
    double b01 = 0.0;
    double b10 = 0.0;
    double b11 = 0.0;

    double at(int outcome, int treatment) const {
        return outcome == 0 ? (treatment == 0 ? b00 : b01) : (treatment == 0 ? b10 : b11);
    }
    friend bool operator==(const OutcomeBenefitMatrix&, const OutcomeBenefitMatrix&) = default;
};

/// Cost of each outcome given the applied treatment. Entries are >= 0.
struct TreatmentCostMatrix {
    double c00 = 0.0;
    double c01 = 0.0;
    double c10 = 0.0;
    double c11 = 0.0;

    double at(int outcome, int treatment) const {
        return outcome == 0 ? (treatment == 0 ? c00 : c01) : (treatment == 0 ? c10 : c11);
    }
    friend bool operator==(const TreatmentCostMatrix&, const TreatmentCostMatrix&) = default;
};

/// Net value matrix (benefit minus cost); entries may have any sign.
struct NetValueMatrix {
    double cb00 = 0.0;
    double cb01 = 0.0;
    double cb10 = 0.0;
    double cb11 = 0.0;

    double at(int outcome, int treatment) const {
        return outcome == 0 ? (treatment == 0 ? cb00 : cb01)
                            : (treatment == 0 ? cb10 : cb11);
    }
    double max_abs() const {
        return std::max({std::abs(cb00), std::abs(cb01), std::abs(cb10), std::abs(cb11)});
    }
    friend bool operator==(const NetValueMatrix&, const NetValueMatrix&) = default;
};

/// Conventional (non-causal) cost-benefit matrix: value of classifying an
/// instance of outcome i into predicted class j.
struct ClassificationCostBenefitMatrix {
    double cb00 = 0.0;
    double cb01 = 0.0;
    double cb10 = 0.0;
    double cb11 = 0.0;
};

struct CostBenefitSpec {
    OutcomeBenefitMatrix ob;
    TreatmentCostMatrix tc;

    friend bool operator==(const CostBenefitSpec&, const CostBenefitSpec&) = default;
};

/// Compensated sum; keeps cancelling net-value combinations accurate.
inline double accurate_sum(std::initializer_list<double> terms) {
    double sum = 0.0, carry = 0.0;
    for (double x : terms) {
        const double t = sum + x;
        carry += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + carry;
}

inline NetValueMatrix net_matrix(const CostBenefitSpec& spec) {
    return {spec.ob.b00 - spec.tc.c00, spec.ob.b01 - spec.tc.c01, spec.ob.b10 - spec.tc.c10,
            spec.ob.b11 - spec.tc.c11};
}

/// The same matrix read as a conventional classification cost-benefit matrix.
inline ClassificationCostBenefitMatrix as_classification(const NetValueMatrix& m) {
    return {m.cb00, m.cb01, m.cb10, m.cb11};
}

struct Violation {
    std::string matrix;  // "outcome_benefit" or "treatment_cost"
    int outcome = 0;
    int treatment = 0;
    std::string reason;  // "negative" or "non-finite"
};

/// Every violated invariant with its cell; empty when the spec is valid.
inline std::vector<Violation> validate(const CostBenefitSpec& spec) {
    std::vector<Violation> out;
    auto check = [&out](const char* name, int i, int j, double v) {
        if (!std::isfinite(v))
            out.push_back({name, i, j, "non-finite"});
        else if (v < 0.0)
            out.push_back({name, i, j, "negative"});
    };
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) check("outcome_benefit", i, j, spec.ob.at(i, j));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) check("treatment_cost", i, j, spec.tc.at(i, j));
    return out;
}

inline bool is_simplified(const CostBenefitSpec& spec) {
    return spec.ob.b00 == 0.0 && spec.ob.b01 == 0.0 && spec.tc.c00 == 0.0 && spec.tc.c10 == 0.0;
}

/// Equivalent spec with b00 = b01 = c00 = c10 = 0, obtained by shifting every
/// net value by the baseline net value (b00 - c00). The shift leaves the
/// decision boundary and every expected causal profit unchanged. Entries of
/// the result can turn negative for specs whose baseline is not the worst
/// cell; c11 is carried over unchanged.
inline CostBenefitSpec normalized(const CostBenefitSpec& spec) {
    if (is_simplified(spec)) return spec;
    const NetValueMatrix net = net_matrix(spec);
    const double base = net.cb00;
    CostBenefitSpec out;
    out.ob.b10 = net.cb10 - base;
    out.tc.c01 = base - net.cb01;
    out.tc.c11 = spec.tc.c11;
    out.ob.b11 = net.cb11 - base + spec.tc.c11;
    return out;
}

/// Treating can ever pay off: c11 < b11 on the normalized spec.
inline bool profitability_condition(const CostBenefitSpec& spec) {
    const CostBenefitSpec n = normalized(spec);
    return n.tc.c11 < n.ob.b11;
}

/// Treating can pay off even at a negative ITE: c11 < b11 - b10 on the
/// normalized spec.
inline bool bonus_condition(const CostBenefitSpec& spec) {
    const CostBenefitSpec n = normalized(spec);
    return n.tc.c11 < n.ob.b11 - n.ob.b10;
}

// The two benefit scenarios used in the experiments: a baseline benefit of
// 100, a 1.2x benefit for the favoured treatment column and a treatment
// cost of 10% of the baseline.
inline CostBenefitSpec scenario_treated_bonus() {
    CostBenefitSpec s;
    s.ob.b11 = 120.0;
    s.ob.b10 = 100.0;
    s.tc.c01 = 10.0;
    s.tc.c11 = 10.0;
    return s;
}

inline CostBenefitSpec scenario_control_bonus() {
    CostBenefitSpec s;
    s.ob.b11 = 100.0;
    s.ob.b10 = 120.0;
    s.tc.c01 = 10.0;
    s.tc.c11 = 10.0;
    return s;
}

}  // namespace cscc

#endif  // CSCC_COST_MODEL_HPP
