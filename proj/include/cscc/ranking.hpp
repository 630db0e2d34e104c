#ifndef CSCC_RANKING_HPP
#define CSCC_RANKING_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "boundary.hpp"
#include "cost_model.hpp"
#include "errors.hpp"

namespace cscc {

/// One instance with its probability estimates and, when it comes from a
/// trial, the group it was in and its observed outcome.
struct ScoredInstance {
    std::string id;
    ProbabilityPair pair;
    std::optional<Treatment> group;
    std::optional<int> outcome;
};

enum class RankerKind { ite, ecp, displacement };

inline const char* to_string(RankerKind r) {
    switch (r) {
        case RankerKind::ite: return "ite";
        case RankerKind::ecp: return "ecp";
        case RankerKind::displacement: return "displacement";
    }
    return "?";
}

struct RankEntry {
    std::size_t index;  // position in the ranked instance set
    std::string id;
    double key;
};

/// Instances ordered by descending key. Ties are broken by descending p11,
/// then ascending id, so the order is fully determined by the input.
struct RankedList {
    RankerKind ranker = RankerKind::ite;
    std::optional<CostBenefitSpec> spec;
    std::vector<RankEntry> entries;

    std::size_t size() const noexcept { return entries.size(); }
};

/// Ranks by an arbitrary per-instance key.
template <class KeyFn>
RankedList rank_by(std::span<const ScoredInstance> instances, KeyFn&& key, RankerKind tag) {
    if (instances.empty()) throw EmptyInput("cannot rank an empty instance set");
    RankedList out;
    out.ranker = tag;
    out.entries.reserve(instances.size());
    for (std::size_t i = 0; i < instances.size(); ++i)
        out.entries.push_back({i, instances[i].id, static_cast<double>(key(instances[i]))});
    std::sort(out.entries.begin(), out.entries.end(),
              [&](const RankEntry& a, const RankEntry& b) {
                  if (a.key != b.key) return a.key > b.key;
                  const double pa = instances[a.index].pair.p11();
                  const double pb = instances[b.index].pair.p11();
                  if (pa != pb) return pa > pb;
                  if (a.id != b.id) return a.id < b.id;
                  return a.index < b.index;
              });
    return out;
}

inline RankedList rank_ite(std::span<const ScoredInstance> instances) {
    return rank_by(instances, [](const ScoredInstance& s) { return s.pair.t(); }, RankerKind::ite);
}

/// Ranks by expected causal profit. Throws DegenerateCostStructure when the
/// spec has no cost-sensitive boundary; use rank_ite in that case.
inline RankedList rank_ecp(std::span<const ScoredInstance> instances,
                           const CostBenefitSpec& spec) {
    const DecisionBoundary boundary = build_boundary(spec);
    RankedList out = rank_by(
        instances, [&](const ScoredInstance& s) { return boundary.expected_causal_profit(s.pair); },
        RankerKind::ecp);
    out.spec = spec;
    return out;
}

/// Ranks by signed displacement from the decision boundary.
inline RankedList rank_displacement(std::span<const ScoredInstance> instances,
                                    const CostBenefitSpec& spec) {
    const DecisionBoundary boundary = build_boundary(spec);
    RankedList out = rank_by(
        instances, [&](const ScoredInstance& s) { return boundary.displacement(s.pair); },
        RankerKind::displacement);
    out.spec = spec;
    return out;
}

struct BudgetSelection {
    std::vector<std::string> selected;  // ranked prefix
    double expected_positives = 0.0;    // sum of p11 over the selection
    double expected_negatives = 0.0;    // sum of 1 - p11
    double expected_spend = 0.0;
    double budget = 0.0;

    std::size_t count() const noexcept { return selected.size(); }
};

/// Longest ranked prefix whose expected treatment spend
/// T0 * c01 + T1 * c11 stays within `budget`. The prefix also stops at the
/// first instance with negative expected causal profit.
inline BudgetSelection select_under_budget(const RankedList& ranked,
                                           std::span<const ScoredInstance> instances,
                                           const CostBenefitSpec& spec, double budget) {
    BudgetSelection sel;
    sel.budget = budget;
    const double c01 = spec.tc.c01;
    const double c11 = spec.tc.c11;
    for (const RankEntry& e : ranked.entries) {
        if (e.index >= instances.size() || instances[e.index].id != e.id)
            throw IdMismatch("ranking does not refer to the given instances (id '" + e.id + "')");
        const ProbabilityPair& pair = instances[e.index].pair;
        if (expected_causal_profit(spec, pair) < 0.0) break;
        const double t1 = sel.expected_positives + pair.p11();
        const double t0 = sel.expected_negatives + (1.0 - pair.p11());
        // T0 * c01 + T1 * c11 with T0 + T1 = count, exact when c01 == c11
        const double spend = c01 * static_cast<double>(sel.count() + 1) + (c11 - c01) * t1;
        if (spend > budget) break;
        sel.expected_positives = t1;
        sel.expected_negatives = t0;
        sel.expected_spend = spend;
        sel.selected.push_back(e.id);
    }
    return sel;
}

namespace detail {

inline std::uint64_t count_inversions(std::vector<std::size_t>& v, std::vector<std::size_t>& tmp,
                                      std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t inv = count_inversions(v, tmp, lo, mid) + count_inversions(v, tmp, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (v[i] <= v[j]) {
            tmp[k++] = v[i++];
        } else {
            inv += mid - i;
            tmp[k++] = v[j++];
        }
    }
    while (i < mid) tmp[k++] = v[i++];
    while (j < hi) tmp[k++] = v[j++];
    std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo),
              tmp.begin() + static_cast<std::ptrdiff_t>(hi),
              v.begin() + static_cast<std::ptrdiff_t>(lo));
    return inv;
}

}  // namespace detail

/// Kendall tau between the two orders. Ranked lists are strict orders, so
/// tau-b reduces to concordant minus discordant pairs over all pairs.
inline double rank_correlation(const RankedList& a, const RankedList& b) {
    if (a.size() != b.size()) throw IdMismatch("ranked lists differ in length");
    std::unordered_map<std::string, std::size_t> pos_b;
    pos_b.reserve(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        if (!pos_b.emplace(b.entries[i].id, i).second)
            throw IdMismatch("duplicate id '" + b.entries[i].id + "'");
    std::vector<std::size_t> seq;
    std::vector<bool> seen(b.size(), false);
    seq.reserve(a.size());
    for (const RankEntry& e : a.entries) {
        auto it = pos_b.find(e.id);
        if (it == pos_b.end()) throw IdMismatch("id '" + e.id + "' missing from second list");
        if (seen[it->second]) throw IdMismatch("duplicate id '" + e.id + "'");
        seen[it->second] = true;
        seq.push_back(it->second);
    }
    const std::size_t n = seq.size();
    if (n < 2) return 1.0;
    std::vector<std::size_t> tmp(n);
    const std::uint64_t discordant = detail::count_inversions(seq, tmp, 0, n);
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    return 1.0 - 2.0 * static_cast<double>(discordant) / pairs;
}

}  // namespace cscc

#endif  // CSCC_RANKING_HPP
