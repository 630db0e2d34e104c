#ifndef CSCC_EVALUATION_HPP
#define CSCC_EVALUATION_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "boundary.hpp"
#include "cost_model.hpp"
#include "errors.hpp"
#include "ranking.hpp"

namespace cscc {

struct CurvePoint {
    double x = 0.0;
    double y = 0.0;
};

/// Group/outcome totals of a labeled instance set: C_y (control) and T_y
/// (treatment).
struct GroupTotals {
    long long c0 = 0, c1 = 0, t0 = 0, t1 = 0;

    long long control() const noexcept { return c0 + c1; }
    long long treatment() const noexcept { return t0 + t1; }
    friend bool operator==(const GroupTotals&, const GroupTotals&) = default;
};

/// Causal confusion matrix at one threshold. `below_*` are the raw counts of
/// instances left untreated (key <= tau) per group and outcome; the four
/// proportions are the matrix cells:
///   c0 = C0(tau)/C, c1 = C1(tau)/C, t0 = (T0 - T0(tau))/T, t1 = (T1 - T1(tau))/T.
struct CausalConfusionMatrix {
    GroupTotals totals;
    long long below_c0 = 0, below_c1 = 0, below_t0 = 0, below_t1 = 0;
    double c0 = 0.0, c1 = 0.0, t0 = 0.0, t1 = 0.0;
};

/// Cellwise difference against the treat-nobody baseline, indexed
/// (outcome, treatment).
struct CausalEffectMatrix {
    double e00 = 0.0, e01 = 0.0, e10 = 0.0, e11 = 0.0;
};

namespace detail {

inline void require_labels(std::span<const ScoredInstance> instances) {
    for (const ScoredInstance& s : instances) {
        if (!s.group || !s.outcome)
            throw MissingLabels("instance '" + s.id + "' has no group or outcome label");
        if (*s.outcome != 0 && *s.outcome != 1)
            throw MissingLabels("instance '" + s.id + "' has a non-binary outcome");
    }
}

inline GroupTotals totals_of(std::span<const ScoredInstance> instances) {
    GroupTotals g;
    for (const ScoredInstance& s : instances) {
        const bool pos = *s.outcome == 1;
        if (*s.group == Treatment::treated)
            (pos ? g.t1 : g.t0)++;
        else
            (pos ? g.c1 : g.c0)++;
    }
    return g;
}

inline GroupTotals labeled_totals(std::span<const ScoredInstance> instances) {
    require_labels(instances);
    GroupTotals g = totals_of(instances);
    if (g.control() == 0) throw EmptyGroup("control group is empty");
    if (g.treatment() == 0) throw EmptyGroup("treatment group is empty");
    return g;
}

inline void require_ranking_of(const RankedList& ranking, std::span<const ScoredInstance> instances) {
    if (ranking.size() != instances.size())
        throw IdMismatch("ranking covers " + std::to_string(ranking.size()) + " instances, data has " +
                         std::to_string(instances.size()));
    for (const RankEntry& e : ranking.entries)
        if (e.index >= instances.size() || instances[e.index].id != e.id)
            throw IdMismatch("ranking does not refer to the given instances (id '" + e.id + "')");
}

// Confusion matrix given the counts of treated (above-threshold) instances.
inline CausalConfusionMatrix confusion_from_treated(const GroupTotals& g, long long tc0,
                                                    long long tc1, long long tt0, long long tt1) {
    CausalConfusionMatrix m;
    m.totals = g;
    m.below_c0 = g.c0 - tc0;
    m.below_c1 = g.c1 - tc1;
    m.below_t0 = g.t0 - tt0;
    m.below_t1 = g.t1 - tt1;
    const double nc = static_cast<double>(g.control());
    const double nt = static_cast<double>(g.treatment());
    m.c0 = static_cast<double>(m.below_c0) / nc;
    m.c1 = static_cast<double>(m.below_c1) / nc;
    m.t0 = static_cast<double>(tt0) / nt;
    m.t1 = static_cast<double>(tt1) / nt;
    return m;
}

// Number of top-ranked instances for a treated proportion eta; values that
// are an integer count up to rounding noise are taken as that count.
inline std::size_t count_for_eta(double eta, std::size_t n) {
    if (!(eta >= 0.0)) return 0;
    if (eta >= 1.0) return n;
    const double r = eta * static_cast<double>(n);
    const double nearest = std::round(r);
    if (std::abs(r - nearest) < 1e-9) return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::ceil(r));
}

}  // namespace detail

/// Causal confusion matrix when the top `k` ranked instances are treated.
inline CausalConfusionMatrix causal_confusion_top_k(std::span<const ScoredInstance> instances,
                                                    const RankedList& ranking, std::size_t k) {
    const GroupTotals g = detail::labeled_totals(instances);
    detail::require_ranking_of(ranking, instances);
    k = std::min(k, ranking.size());
    long long tc0 = 0, tc1 = 0, tt0 = 0, tt1 = 0;
    for (std::size_t r = 0; r < k; ++r) {
        const ScoredInstance& s = instances[ranking.entries[r].index];
        const bool pos = *s.outcome == 1;
        if (*s.group == Treatment::treated)
            (pos ? tt1 : tt0)++;
        else
            (pos ? tc1 : tc0)++;
    }
    return detail::confusion_from_treated(g, tc0, tc1, tt0, tt1);
}

/// Causal confusion matrix at threshold `tau` on the ranking key: instances
/// with key > tau are treated, key <= tau are not.
inline CausalConfusionMatrix causal_confusion_at_tau(std::span<const ScoredInstance> instances,
                                                     const RankedList& ranking, double tau) {
    const GroupTotals g = detail::labeled_totals(instances);
    detail::require_ranking_of(ranking, instances);
    long long tc0 = 0, tc1 = 0, tt0 = 0, tt1 = 0;
    for (const RankEntry& e : ranking.entries) {
        if (!(e.key > tau)) continue;
        const ScoredInstance& s = instances[e.index];
        const bool pos = *s.outcome == 1;
        if (*s.group == Treatment::treated)
            (pos ? tt1 : tt0)++;
        else
            (pos ? tc1 : tc0)++;
    }
    return detail::confusion_from_treated(g, tc0, tc1, tt0, tt1);
}

/// Causal confusion matrix when the top ceil(eta * N) ranked instances are
/// treated.
inline CausalConfusionMatrix causal_confusion_at_eta(std::span<const ScoredInstance> instances,
                                                     const RankedList& ranking, double eta) {
    return causal_confusion_top_k(instances, ranking,
                                  detail::count_for_eta(eta, instances.size()));
}

/// Effect matrix of `at` against the baseline `baseline` (normally the
/// matrix at tau = +inf). Computed from the raw counts.
inline CausalEffectMatrix causal_effect(const CausalConfusionMatrix& at,
                                        const CausalConfusionMatrix& baseline) {
    if (!(at.totals == baseline.totals))
        throw IdMismatch("confusion matrices come from different datasets");
    const double nc = static_cast<double>(at.totals.control());
    const double nt = static_cast<double>(at.totals.treatment());
    CausalEffectMatrix e;
    e.e00 = static_cast<double>(at.below_c0 - baseline.below_c0) / nc;
    e.e10 = static_cast<double>(at.below_c1 - baseline.below_c1) / nc;
    e.e01 = static_cast<double>(baseline.below_t0 - at.below_t0) / nt;
    e.e11 = static_cast<double>(baseline.below_t1 - at.below_t1) / nt;
    return e;
}

/// Average profit per instance of treating the above-threshold set instead
/// of nobody.
inline double causal_profit(const CausalEffectMatrix& e, const CostBenefitSpec& spec) {
    const NetValueMatrix net = net_matrix(spec);
    return 0.0 + e.e00 * net.cb00 + e.e01 * net.cb01 + e.e10 * net.cb10 + e.e11 * net.cb11;
}

struct ProfitPoint {
    double eta = 0.0;  // treated proportion k / N
    double tau = 0.0;  // key of the last treated instance; +inf at eta = 0
    double value = 0.0;
};

struct ProfitCurve {
    std::vector<ProfitPoint> points;
    double ap = 0.0;        // trapezoidal area over eta
    double mp = 0.0;        // maximum over the grid
    double eta_star = 0.0;  // smallest eta attaining mp
};

/// Causal profit at every treated proportion k/N, k = 0..N.
inline ProfitCurve profit_curve(std::span<const ScoredInstance> instances,
                                const RankedList& ranking, const CostBenefitSpec& spec) {
    const GroupTotals g = detail::labeled_totals(instances);
    detail::require_ranking_of(ranking, instances);
    const std::size_t n = instances.size();
    const CausalConfusionMatrix baseline = detail::confusion_from_treated(g, 0, 0, 0, 0);

    ProfitCurve curve;
    curve.points.reserve(n + 1);
    long long tc0 = 0, tc1 = 0, tt0 = 0, tt1 = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        if (k > 0) {
            const ScoredInstance& s = instances[ranking.entries[k - 1].index];
            const bool pos = *s.outcome == 1;
            if (*s.group == Treatment::treated)
                (pos ? tt1 : tt0)++;
            else
                (pos ? tc1 : tc0)++;
        }
        const CausalConfusionMatrix cm = detail::confusion_from_treated(g, tc0, tc1, tt0, tt1);
        ProfitPoint p;
        p.eta = static_cast<double>(k) / static_cast<double>(n);
        p.tau = k == 0 ? std::numeric_limits<double>::infinity() : ranking.entries[k - 1].key;
        p.value = causal_profit(causal_effect(cm, baseline), spec);
        curve.points.push_back(p);
    }

    double area = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double w = (k == 0 || k == n) ? 0.5 : 1.0;
        area += w * curve.points[k].value;
    }
    curve.ap = area / static_cast<double>(n);
    curve.mp = curve.points[0].value;
    curve.eta_star = curve.points[0].eta;
    for (const ProfitPoint& p : curve.points) {
        if (p.value > curve.mp) {
            curve.mp = p.value;
            curve.eta_star = p.eta;
        }
    }
    return curve;
}

struct QiniResult {
    std::vector<CurvePoint> curve;  // (targeted fraction, incremental positive rate)
    double coefficient = 0.0;
};

/// Qini curve over the joint ranking: at the top-k set S,
/// q = Y_T(S)/N_T - Y_C(S)/N_C. The coefficient is the trapezoidal area
/// under q minus the area under the random-targeting chord, q(1)/2.
inline QiniResult qini(std::span<const ScoredInstance> instances, const RankedList& ranking) {
    const GroupTotals g = detail::labeled_totals(instances);
    detail::require_ranking_of(ranking, instances);
    const std::size_t n = instances.size();
    const double nt = static_cast<double>(g.treatment());
    const double nc = static_cast<double>(g.control());

    QiniResult out;
    out.curve.reserve(n + 1);
    out.curve.push_back({0.0, 0.0});
    long long yt = 0, yc = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        const ScoredInstance& s = instances[ranking.entries[k - 1].index];
        if (*s.outcome == 1) (*s.group == Treatment::treated ? yt : yc)++;
        out.curve.push_back({static_cast<double>(k) / static_cast<double>(n),
                             static_cast<double>(yt) / nt - static_cast<double>(yc) / nc});
    }
    double area = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
        const double w = (k == 0 || k == n) ? 0.5 : 1.0;
        area += w * out.curve[k].y;
    }
    area /= static_cast<double>(n);
    out.coefficient = area - out.curve.back().y / 2.0;
    return out;
}

/// Overall effect of the trial: treatment positive rate minus control
/// positive rate.
inline double overall_effect(std::span<const ScoredInstance> instances) {
    const GroupTotals g = detail::labeled_totals(instances);
    return static_cast<double>(g.t1) / static_cast<double>(g.treatment()) -
           static_cast<double>(g.c1) / static_cast<double>(g.control());
}

/// Positives of `group` whose ranking key is >= tau.
inline long long cumulative_positives_at(std::span<const ScoredInstance> instances,
                                         const RankedList& ranking, Treatment group, double tau) {
    detail::require_ranking_of(ranking, instances);
    long long count = 0;
    for (const RankEntry& e : ranking.entries) {
        const ScoredInstance& s = instances[e.index];
        if (s.group == group && s.outcome == 1 && e.key >= tau) ++count;
    }
    return count;
}

/// Cumulative positives of `group` as a step function of the threshold,
/// sampled at every distinct ranking key, in ascending tau.
inline std::vector<CurvePoint> cumulative_positives(std::span<const ScoredInstance> instances,
                                                    const RankedList& ranking, Treatment group) {
    detail::require_ranking_of(ranking, instances);
    std::vector<CurvePoint> desc;
    long long count = 0;
    for (std::size_t r = 0; r < ranking.size(); ++r) {
        const RankEntry& e = ranking.entries[r];
        const ScoredInstance& s = instances[e.index];
        if (s.group == group && s.outcome == 1) ++count;
        const bool last_of_key = r + 1 == ranking.size() || ranking.entries[r + 1].key != e.key;
        if (last_of_key) desc.push_back({e.key, static_cast<double>(count)});
    }
    return {desc.rbegin(), desc.rend()};
}

inline constexpr std::size_t kScoreBins = 20;

/// Histogram of p11 over 20 equal-width bins on [0,1]; 1.0 falls in the last
/// bin. `group` restricts to one trial group; nullopt counts everything.
inline std::array<long long, kScoreBins> score_distribution(
    std::span<const ScoredInstance> instances, std::optional<Treatment> group) {
    std::array<long long, kScoreBins> bins{};
    for (const ScoredInstance& s : instances) {
        if (group && s.group != group) continue;
        auto b = static_cast<std::size_t>(std::floor(s.pair.p11() * static_cast<double>(kScoreBins)));
        bins[std::min(b, kScoreBins - 1)]++;
    }
    return bins;
}

}  // namespace cscc

#endif  // CSCC_EVALUATION_HPP
