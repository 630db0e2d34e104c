#ifndef CSCC_JSON_IO_HPP
#define CSCC_JSON_IO_HPP

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cost_model.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "logistic.hpp"
#include "metalearners.hpp"

namespace cscc {

using json = nlohmann::json;

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("FileNotFound", path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("MalformedJson", path + ": " + e.what());
    }
}

namespace detail {

inline double json_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key))
        throw ConfigError("MissingKey", where + ": missing key \"" + key + "\"");
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError("InvalidValue", where + ": \"" + key + "\" must be a number");
    return v.get<double>();
}

}  // namespace detail

/// {"outcome_benefit": {"b00",...,"b11"}, "treatment_cost": {"c00",...,"c11"}}.
/// Every key is required; extra keys such as "name" are ignored.
inline CostBenefitSpec cost_spec_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("InvalidValue", "cost config must be a JSON object");
    if (!j.contains("outcome_benefit")) throw ConfigError("MissingKey", "cost config: missing \"outcome_benefit\"");
    if (!j.contains("treatment_cost")) throw ConfigError("MissingKey", "cost config: missing \"treatment_cost\"");
    const json& ob = j.at("outcome_benefit");
    const json& tc = j.at("treatment_cost");
    CostBenefitSpec s;
    s.ob.b00 = detail::json_number(ob, "b00", "outcome_benefit");
    s.ob.b01 = detail::json_number(ob, "b01", "outcome_benefit");
    s.ob.b10 = detail::json_number(ob, "b10", "outcome_benefit");
    s.ob.b11 = detail::json_number(ob, "b11", "outcome_benefit");
    s.tc.c00 = detail::json_number(tc, "c00", "treatment_cost");
    s.tc.c01 = detail::json_number(tc, "c01", "treatment_cost");
    s.tc.c10 = detail::json_number(tc, "c10", "treatment_cost");
    s.tc.c11 = detail::json_number(tc, "c11", "treatment_cost");
    return s;
}

inline json to_json(const CostBenefitSpec& s) {
    return {{"outcome_benefit", {{"b00", s.ob.b00}, {"b01", s.ob.b01}, {"b10", s.ob.b10}, {"b11", s.ob.b11}}},
            {"treatment_cost", {{"c00", s.tc.c00}, {"c01", s.tc.c01}, {"c10", s.tc.c10}, {"c11", s.tc.c11}}}};
}

/// Reads a cost config and rejects specs that fail validation.
inline CostBenefitSpec read_cost_spec(const std::string& path) {
    const CostBenefitSpec spec = cost_spec_from_json(read_json_file(path));
    const auto violations = validate(spec);
    if (!violations.empty()) {
        std::string msg = path + ":";
        for (const Violation& v : violations)
            msg += " " + v.matrix + "(" + std::to_string(v.outcome) + "," + std::to_string(v.treatment) + ") " +
                   v.reason + ";";
        throw ConfigError("InvalidCostSpec", msg);
    }
    return spec;
}

/// Generator settings; absent keys keep the calibrated defaults.
inline GeneratorConfig generator_config_from_json(const json& j) {
    GeneratorConfig c = GeneratorConfig::defaults();
    if (!j.is_object()) throw ConfigError("InvalidValue", "generator config must be a JSON object");
    try {
        if (j.contains("n")) c.n = j.at("n").get<std::size_t>();
        if (j.contains("d_base")) c.d_base = j.at("d_base").get<std::size_t>();
        if (j.contains("d_uplift")) c.d_uplift = j.at("d_uplift").get<std::size_t>();
        if (j.contains("d_noise")) c.d_noise = j.at("d_noise").get<std::size_t>();
        if (j.contains("intercept")) c.intercept = j.at("intercept").get<double>();
        if (j.contains("base_scale")) c.base_scale = j.at("base_scale").get<double>();
        if (j.contains("uplift_slope")) c.uplift_slope = j.at("uplift_slope").get<double>();
        if (j.contains("effect_scale")) c.effect_scale = j.at("effect_scale").get<double>();
        if (j.contains("treatment_fraction")) c.treatment_fraction = j.at("treatment_fraction").get<double>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ConfigError("InvalidValue", std::string("generator config: ") + e.what());
    }
    c.check();
    return c;
}

inline json to_json(const GeneratorConfig& c) {
    return {{"n", c.n},
            {"d_base", c.d_base},
            {"d_uplift", c.d_uplift},
            {"d_noise", c.d_noise},
            {"intercept", c.intercept},
            {"base_scale", c.base_scale},
            {"uplift_slope", c.uplift_slope},
            {"effect_scale", c.effect_scale},
            {"treatment_fraction", c.treatment_fraction},
            {"seed", c.seed}};
}

inline json to_json(const LogisticModel& m) {
    return {{"input_dims", m.input_dims},
            {"kept", m.kept},
            {"mean", m.mean},
            {"scale", m.scale},
            {"weights", m.weights},
            {"lambda", m.lambda},
            {"iterations", m.iterations},
            {"gradient_norm", m.gradient_norm},
            {"converged", m.converged},
            {"warnings", m.warnings}};
}

inline LogisticModel logistic_from_json(const json& j) {
    LogisticModel m;
    try {
        m.input_dims = j.at("input_dims").get<std::size_t>();
        m.kept = j.at("kept").get<std::vector<std::size_t>>();
        m.mean = j.at("mean").get<std::vector<double>>();
        m.scale = j.at("scale").get<std::vector<double>>();
        m.weights = j.at("weights").get<std::vector<double>>();
        m.lambda = j.at("lambda").get<double>();
        m.iterations = j.at("iterations").get<int>();
        m.gradient_norm = j.at("gradient_norm").get<double>();
        m.converged = j.at("converged").get<bool>();
        m.warnings = j.value("warnings", std::vector<std::string>{});
    } catch (const json::exception& e) {
        throw ConfigError("MalformedModel", e.what());
    }
    const std::size_t k = m.kept.size();
    if (m.mean.size() != k || m.scale.size() != k || m.weights.size() != k + 1)
        throw ConfigError("MalformedModel", "weight and standardisation vectors disagree in length");
    for (std::size_t c : m.kept)
        if (c >= m.input_dims) throw ConfigError("MalformedModel", "kept column out of range");
    return m;
}

/// Model file: scheme tag, feature names, and the fitted submodels.
inline json to_json(const CausalModel& model, const std::vector<std::string>& feature_names = {}) {
    json j = {{"scheme", model.scheme()}, {"input_dims", model.input_dims}, {"feature_names", feature_names}};
    if (const auto* t = std::get_if<TLearner>(&model.learner)) {
        j["treated"] = to_json(t->treated);
        j["control"] = to_json(t->control);
    } else {
        j["model"] = to_json(std::get<SLearner>(model.learner).model);
    }
    return j;
}

inline CausalModel causal_model_from_json(const json& j) {
    CausalModel m;
    try {
        m.input_dims = j.at("input_dims").get<std::size_t>();
        const std::string scheme = j.at("scheme").get<std::string>();
        if (scheme == "t") {
            m.learner = TLearner{logistic_from_json(j.at("treated")), logistic_from_json(j.at("control"))};
        } else if (scheme == "s") {
            m.learner = SLearner{logistic_from_json(j.at("model"))};
        } else {
            throw ConfigError("MalformedModel", "unknown scheme \"" + scheme + "\"");
        }
    } catch (const json::exception& e) {
        throw ConfigError("MalformedModel", e.what());
    }
    return m;
}

}  // namespace cscc

#endif  // CSCC_JSON_IO_HPP
