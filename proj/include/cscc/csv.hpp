#ifndef CSCC_CSV_HPP
#define CSCC_CSV_HPP

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "dataset.hpp"
#include "errors.hpp"
#include "evaluation.hpp"
#include "ranking.hpp"

namespace cscc {

/// Shortest text that parses back to the same double (17 significant digits).
inline std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Plain comma-separated table: one header line, no quoting or embedded
/// commas. Line numbers are 1-based file lines (the header is line 1).
struct CsvTable {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> lines;

    std::optional<std::size_t> column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        return std::nullopt;
    }

    std::size_t require(const std::string& name) const {
        if (auto c = column(name)) return *c;
        throw MissingColumn(path, name);
    }

    double number(std::size_t r, std::size_t c) const {
        const std::string& s = rows[r][c];
        char* end = nullptr;
        errno = 0;
        const double v = s.empty() ? 0.0 : std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
            throw UnparsableNumber(path, lines[r], header[c], s);
        return v;
    }

    int binary(std::size_t r, std::size_t c) const {
        const std::string& s = rows[r][c];
        if (s == "0" || s == "0.0") return 0;
        if (s == "1" || s == "1.0") return 1;
        throw NonBinaryLabel(path, lines[r], header[c], s);
    }
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        if (field.size() >= 2 && field.front() == '"' && field.back() == '"')
            field = field.substr(1, field.size() - 2);
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace detail

inline CsvTable parse_csv(std::istream& in, const std::string& path) {
    CsvTable t;
    t.path = path;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (t.header.empty()) {
            t.header = detail::split_csv_line(line);
            continue;
        }
        auto fields = detail::split_csv_line(line);
        if (fields.size() != t.header.size())
            throw DataError("MalformedRow", path + ": line " + std::to_string(lineno) + " has " +
                                                std::to_string(fields.size()) + " fields, header has " +
                                                std::to_string(t.header.size()));
        t.rows.push_back(std::move(fields));
        t.lines.push_back(lineno);
    }
    if (t.header.empty()) throw EmptyFile(path);
    return t;
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("FileNotFound", path);
    return parse_csv(in, path);
}

/// Which columns of a dataset file hold what. With no explicit feature
/// list, every column other than id, treatment, outcome and the
/// ground-truth columns is a feature.
struct DatasetSchema {
    std::string treatment = "treatment";
    std::string outcome = "outcome";
    std::vector<std::string> features;
};

inline TrialDataset dataset_from_table(const CsvTable& t, const DatasetSchema& schema = {}) {
    const std::size_t wcol = t.require(schema.treatment);
    const std::size_t ycol = t.require(schema.outcome);
    const auto idcol = t.column("id");
    const auto gt11 = t.column("gt_p11");
    const auto gt10 = t.column("gt_p10");

    std::vector<std::size_t> fcols;
    if (schema.features.empty()) {
        for (std::size_t c = 0; c < t.header.size(); ++c) {
            const std::string& h = t.header[c];
            if (c == wcol || c == ycol || h == "id" || h == "gt_p11" || h == "gt_p10") continue;
            fcols.push_back(c);
        }
    } else {
        for (const std::string& f : schema.features) fcols.push_back(t.require(f));
    }

    TrialDataset data;
    for (std::size_t c : fcols) data.feature_names.push_back(t.header[c]);
    data.features = Matrix(t.rows.size(), fcols.size());
    const bool has_truth = gt11 && gt10;
    if (has_truth) data.truth.emplace().reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        for (std::size_t j = 0; j < fcols.size(); ++j) data.features(r, j) = t.number(r, fcols[j]);
        data.treatment.push_back(t.binary(r, wcol));
        data.outcome.push_back(t.binary(r, ycol));
        data.ids.push_back(idcol ? t.rows[r][*idcol] : std::to_string(r));
        if (has_truth) {
            const double p11 = t.number(r, *gt11);
            const double p10 = t.number(r, *gt10);
            if (!(p11 >= 0.0 && p11 <= 1.0 && p10 >= 0.0 && p10 <= 1.0))
                throw UnparsableNumber(t.path, t.lines[r], "gt_p11/gt_p10", t.rows[r][*gt11] + "/" + t.rows[r][*gt10]);
            data.truth->emplace_back(p11, p10);
        }
    }
    if (data.size() == 0) throw EmptyFile(t.path);
    return data;
}

inline TrialDataset ingest_csv(const std::string& path, const DatasetSchema& schema = {}) {
    return dataset_from_table(read_csv(path), schema);
}

/// Features, then treatment and outcome, then gt_p11/gt_p10 when known.
inline void write_dataset_csv(std::ostream& out, const TrialDataset& data) {
    for (const std::string& name : data.feature_names) out << name << ',';
    out << "treatment,outcome";
    if (data.truth) out << ",gt_p11,gt_p10";
    out << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (double v : data.features.row(i)) out << format_double(v) << ',';
        out << data.treatment[i] << ',' << data.outcome[i];
        if (data.truth)
            out << ',' << format_double((*data.truth)[i].p11()) << ',' << format_double((*data.truth)[i].p10());
        out << '\n';
    }
}

/// Score file: id,p11,p10,t and, for labeled instances, treatment,outcome.
inline void write_scores_csv(std::ostream& out, std::span<const ScoredInstance> scores) {
    bool labeled = !scores.empty();
    for (const ScoredInstance& s : scores) labeled = labeled && s.group && s.outcome;
    out << "id,p11,p10,t" << (labeled ? ",treatment,outcome" : "") << '\n';
    for (const ScoredInstance& s : scores) {
        out << s.id << ',' << format_double(s.pair.p11()) << ',' << format_double(s.pair.p10()) << ','
            << format_double(s.pair.t());
        if (labeled) out << ',' << static_cast<int>(*s.group) << ',' << *s.outcome;
        out << '\n';
    }
}

/// Reads a score file. Treatment/outcome labels are attached when both
/// columns are present; t is recomputed from p11 and p10.
inline std::vector<ScoredInstance> read_scores_csv(const std::string& path, const std::string& treatment_col = "treatment",
                                                   const std::string& outcome_col = "outcome") {
    const CsvTable t = read_csv(path);
    const std::size_t idc = t.require("id");
    const std::size_t p11c = t.require("p11");
    const std::size_t p10c = t.require("p10");
    const auto wc = t.column(treatment_col);
    const auto yc = t.column(outcome_col);
    std::vector<ScoredInstance> out;
    out.reserve(t.rows.size());
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double p11 = t.number(r, p11c);
        const double p10 = t.number(r, p10c);
        if (!(p11 >= 0.0 && p11 <= 1.0 && p10 >= 0.0 && p10 <= 1.0))
            throw DataError("InvalidProbability", path + ": line " + std::to_string(t.lines[r]) +
                                                      ": probabilities must lie in [0,1]");
        ScoredInstance s{t.rows[r][idc], ProbabilityPair(p11, p10), {}, {}};
        if (!seen.emplace(s.id, r).second)
            throw DataError("DuplicateId", path + ": line " + std::to_string(t.lines[r]) + ": id '" + s.id + "'");
        if (wc && yc) {
            s.group = t.binary(r, *wc) == 1 ? Treatment::treated : Treatment::control;
            s.outcome = t.binary(r, *yc);
        }
        out.push_back(std::move(s));
    }
    if (out.empty()) throw EmptyFile(path);
    return out;
}

/// Ranking file: id,rank,key,p11,p10,t,assigned_treatment (rank is 1-based).
inline void write_ranking_csv(std::ostream& out, const RankedList& ranking,
                              std::span<const ScoredInstance> instances, const DecisionBoundary& boundary) {
    out << "id,rank,key,p11,p10,t,assigned_treatment\n";
    for (std::size_t r = 0; r < ranking.size(); ++r) {
        const RankEntry& e = ranking.entries[r];
        const ProbabilityPair& p = instances[e.index].pair;
        out << e.id << ',' << (r + 1) << ',' << format_double(e.key) << ',' << format_double(p.p11()) << ','
            << format_double(p.p10()) << ',' << format_double(p.t()) << ','
            << static_cast<int>(boundary.classify(p)) << '\n';
    }
}

inline void write_curve_csv(std::ostream& out, std::span<const CurvePoint> curve) {
    out << "eta_or_tau,value\n";
    for (const CurvePoint& p : curve) out << format_double(p.x) << ',' << format_double(p.y) << '\n';
}

inline std::vector<CurvePoint> profit_points(const ProfitCurve& curve) {
    std::vector<CurvePoint> out;
    out.reserve(curve.points.size());
    for (const ProfitPoint& p : curve.points) out.push_back({p.eta, p.value});
    return out;
}

}  // namespace cscc

#endif  // CSCC_CSV_HPP
