#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "pointersim/errors.hpp"
#include "pointersim/sweep.hpp"
#include "pointersim/version.hpp"

namespace pointersim {

namespace {

using ordered_json = nlohmann::ordered_json;

// Full round-trip精度: 17 significant digits survive text -> double exactly.
std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

void emit_csv(std::ostream& os, const SweepConfig& cfg, const SweepResult& result) {
    for (std::size_t c = 0; c < result.columns.size(); ++c) {
        if (c) os << ',';
        os << csv_quote(result.columns[c]);
    }
    if (cfg.oracle) os << ",error";
    os << '\n';
    for (const SweepRow& row : result.rows) {
        os << num17(row.value);
        for (double q : row.quantities) os << ',' << num17(q);
        if (cfg.oracle) os << ',' << csv_quote(row.error);
        os << '\n';
    }
}

ordered_json scenario_json(const ScenarioConfig& s) {
    ordered_json j;
    if (s.type == ScenarioType::generic) {
        j["type"] = "generic";
        j["eigenvalues"] = s.eigenvalues;
        if (!s.eigenphases.empty()) j["eigenphases"] = s.eigenphases;
        auto amps = [](const std::vector<cplx>& v) {
            ordered_json a = ordered_json::array();
            for (const cplx& z : v) a.push_back({z.real(), z.imag()});
            return a;
        };
        j["pre"] = amps(s.pre_amplitudes);
        if (!s.post_amplitudes.empty()) j["post"] = amps(s.post_amplitudes);
    } else {
        j["type"] = "stern-gerlach";
        j["theta1"] = s.theta1;
        j["delta1"] = s.delta1;
        j["theta2"] = s.theta2;
        j["delta2"] = s.delta2;
    }
    return j;
}

ordered_json config_json(const SweepConfig& cfg) {
    ordered_json j;
    j["scenario"] = scenario_json(cfg.scenario);
    j["parameters"] = {{"g", cfg.base.g}, {"t", cfg.base.t}, {"m", cfg.base.m},
                       {"sigma", cfg.base.sigma}};
    j["sweep"] = {{"parameter", cfg.parameter},
                  {"min", cfg.min},
                  {"max", cfg.max},
                  {"count", cfg.count},
                  {"spacing", cfg.spacing == SweepSpacing::linear ? "linear" : "log"}};
    j["output"] = {{"quantities", cfg.quantities},
                   {"path", cfg.out_path},
                   {"format", cfg.format == OutputFormat::csv ? "csv" : "json"}};
    j["oracle"] = {{"enabled", cfg.oracle},
                   {"max_points", cfg.oracle_max_points},
                   {"adjudicate", cfg.adjudicate}};
    return j;
}

ordered_json adjudication_json(const AdjudicationReport& rep) {
    ordered_json j;
    j["point"] = {{"g", rep.cfg.g}, {"t", rep.cfg.t}, {"m", rep.cfg.m},
                  {"sigma", rep.cfg.sigma}, {"ai", rep.ai}, {"aj", rep.aj}};
    j["grid_log_f"] = rep.grid_log_f;
    j["log_error_bar"] = rep.log_error_bar;
    j["exact_log_f"] = rep.exact_log_f;
    ordered_json readings = ordered_json::array();
    for (const AdjudicationReading& r : rep.readings)
        readings.push_back({{"name", r.name},
                            {"log_f", r.log_f},
                            {"deviation", r.deviation},
                            {"accepted", r.accepted}});
    j["readings"] = readings;
    j["separation"] = rep.separation;
    j["margin_ratio"] = rep.margin_ratio;
    j["verdict"] = rep.verdict;
    return j;
}

void emit_json(std::ostream& os, const SweepConfig& cfg, const SweepResult& result) {
    ordered_json j;
    j["metadata"] = {{"tool", "sweep"},
                     {"version", kVersion},
                     {"units", "hbar=1"},
                     {"config", config_json(cfg)}};
    j["columns"] = result.columns;

    ordered_json rows = ordered_json::array();
    for (const SweepRow& row : result.rows) {
        ordered_json r;
        r[result.columns.front()] = row.value;
        for (std::size_t q = 0; q + 1 < result.columns.size(); ++q) {
            const double v = row.quantities[q];
            if (std::isfinite(v))
                r[result.columns[q + 1]] = v;
            else
                r[result.columns[q + 1]] = nullptr;
        }
        if (cfg.oracle) r["error"] = row.error;
        rows.push_back(std::move(r));
    }
    j["rows"] = rows;

    ordered_json summary;
    summary["first_point"] = {{"near_weak", result.summary.first_near_weak},
                              {"near_strong", result.summary.first_near_strong}};
    summary["last_point"] = {{"near_weak", result.summary.last_near_weak},
                             {"near_strong", result.summary.last_near_strong}};
    auto dev = [](double v) -> ordered_json {
        if (std::isfinite(v)) return v;
        return nullptr;
    };
    summary["max_f_deviation"] = dev(result.summary.max_f_deviation);
    summary["max_dx_deviation"] = dev(result.summary.max_dx_deviation);
    summary["max_dp_deviation"] = dev(result.summary.max_dp_deviation);
    if (result.summary.adjudication)
        summary["adjudication"] = adjudication_json(*result.summary.adjudication);
    j["summary"] = summary;

    os << j.dump(2) << '\n';
}

} // namespace

void emit(std::ostream& os, OutputFormat format, const SweepConfig& cfg,
          const SweepResult& result) {
    if (result.rows.empty()) throw ConfigError("emit: refusing to write an empty sweep");
    if (format == OutputFormat::csv)
        emit_csv(os, cfg, result);
    else
        emit_json(os, cfg, result);
    if (!os) throw IoError("emit: stream write failed");
}

void emit_to_file(const std::string& path, OutputFormat format, const SweepConfig& cfg,
                  const SweepResult& result) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("emit: cannot open output file: " + path);
    emit(os, format, cfg, result);
    os.flush();
    if (!os) throw IoError("emit: write failed for: " + path);
}

} // namespace pointersim
