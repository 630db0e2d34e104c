#ifndef CSCC_TESTS_HELPERS_HPP
#define CSCC_TESTS_HELPERS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cscc.hpp"

namespace testutil {

using cscc::ProbabilityPair;
using cscc::ScoredInstance;
using cscc::Treatment;

inline ScoredInstance labeled(std::string id, double p11, double p10, Treatment g, int y) {
    return {std::move(id), ProbabilityPair(p11, p10), g, y};
}

// Eight-instance toy trial. Treatment outcomes [1,1,0,0] with
// t [0.5,0.1,0.4,-0.2]; control outcomes [1,0,0,1] with t [0.3,0.6,-0.1,0.0].
// p11 is 0.5 + t/2, p10 is 0.5 - t/2.
inline std::vector<ScoredInstance> toy() {
    auto mk = [](std::string id, double t, Treatment g, int y) {
        return labeled(std::move(id), 0.5 + t / 2, 0.5 - t / 2, g, y);
    };
    return {mk("T1", 0.5, Treatment::treated, 1),  mk("T2", 0.1, Treatment::treated, 1),
            mk("T3", 0.4, Treatment::treated, 0),  mk("T4", -0.2, Treatment::treated, 0),
            mk("C1", 0.3, Treatment::control, 1),  mk("C2", 0.6, Treatment::control, 0),
            mk("C3", -0.1, Treatment::control, 0), mk("C4", 0.0, Treatment::control, 1)};
}

inline cscc::CostBenefitSpec no_cost_scenario() {
    cscc::CostBenefitSpec s;
    s.ob.b11 = 120;
    s.ob.b10 = 100;
    return s;
}

inline cscc::CostBenefitSpec spec_of(double b00, double b01, double b10, double b11, double c00, double c01,
                                     double c10, double c11) {
    cscc::CostBenefitSpec s;
    s.ob = {b00, b01, b10, b11};
    s.tc = {c00, c01, c10, c11};
    return s;
}

// Random labeled dataset with both groups present.
inline std::vector<ScoredInstance> random_labeled(cscc::SplitMix64& rng, std::size_t n, bool coarse = false) {
    std::vector<ScoredInstance> out;
    for (std::size_t i = 0; i < n; ++i) {
        double p11 = rng.uniform(), p10 = rng.uniform();
        if (coarse) {  // few distinct values to provoke ties
            p11 = static_cast<double>(rng.below(5)) / 4.0;
            p10 = static_cast<double>(rng.below(5)) / 4.0;
        }
        const Treatment g = i == 0 ? Treatment::treated
                            : i == 1 ? Treatment::control
                                     : (rng.bernoulli(0.5) ? Treatment::treated : Treatment::control);
        out.push_back({"i" + std::to_string(i), ProbabilityPair(p11, p10), g, rng.bernoulli(0.5) ? 1 : 0});
    }
    return out;
}

// Random spec with small integer entries.
inline cscc::CostBenefitSpec random_integer_spec(cscc::SplitMix64& rng, int hi = 50) {
    auto v = [&] { return static_cast<double>(rng.below(static_cast<std::uint64_t>(hi) + 1)); };
    return spec_of(v(), v(), v(), v(), v(), v(), v(), v());
}

// Independent profit recount: for the top-k prefix of `order` (indices into
// `data`), count group/outcome cells directly and evaluate the causal profit
// as one exact rational over integer net values before a single division.
inline double brute_force_profit(const std::vector<ScoredInstance>& data, const std::vector<std::size_t>& order,
                                 std::size_t k, const cscc::CostBenefitSpec& spec) {
    std::vector<bool> treated(data.size(), false);
    for (std::size_t r = 0; r < k; ++r) treated[order[r]] = true;
    long long C0 = 0, C1 = 0, T0 = 0, T1 = 0, C0b = 0, C1b = 0, T0a = 0, T1a = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const bool pos = *data[i].outcome == 1;
        if (*data[i].group == Treatment::control) {
            (pos ? C1 : C0)++;
            if (!treated[i]) (pos ? C1b : C0b)++;
        } else {
            (pos ? T1 : T0)++;
            if (treated[i]) (pos ? T1a : T0a)++;
        }
    }
    const auto cb = [&](int i, int j) { return static_cast<long long>(spec.ob.at(i, j) - spec.tc.at(i, j)); };
    const long long nc = C0 + C1, nt = T0 + T1;
    const long long num_c = (C0b - C0) * cb(0, 0) + (C1b - C1) * cb(1, 0);
    const long long num_t = T0a * cb(0, 1) + T1a * cb(1, 1);
    return static_cast<double>(num_c * nt + num_t * nc) / static_cast<double>(nc * nt);
}

inline std::vector<std::size_t> order_of(const cscc::RankedList& r) {
    std::vector<std::size_t> out;
    for (const auto& e : r.entries) out.push_back(e.index);
    return out;
}

}  // namespace testutil

#endif  // CSCC_TESTS_HELPERS_HPP
