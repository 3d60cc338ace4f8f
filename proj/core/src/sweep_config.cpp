#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "pointersim/errors.hpp"
#include "pointersim/sweep.hpp"

namespace pointersim {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Split on top-level commas; parentheses group complex "(re,im)" entries.
std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

double parse_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse '" + s + "' as a number for " + key);
    }
}

std::size_t parse_size(const std::string& s, const std::string& key) {
    const double v = parse_double(s, key);
    if (v < 0.0 || v != std::floor(v))
        throw ConfigError("config: " + key + " must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "on" || s == "1") return true;
    if (s == "false" || s == "off" || s == "0") return false;
    throw ConfigError("config: " + key + " must be true/false");
}

cplx parse_complex(const std::string& s, const std::string& key) {
    const std::string v = trim(s);
    if (!v.empty() && v.front() == '(') {
        if (v.back() != ')') throw ConfigError("config: malformed complex value in " + key);
        const std::vector<std::string> parts = split_list(v.substr(1, v.size() - 2));
        if (parts.size() != 2) throw ConfigError("config: complex values are (re,im) in " + key);
        return {parse_double(parts[0], key), parse_double(parts[1], key)};
    }
    return {parse_double(v, key), 0.0};
}

std::vector<double> parse_double_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    for (const std::string& item : split_list(s)) out.push_back(parse_double(item, key));
    return out;
}

std::vector<cplx> parse_complex_list(const std::string& s, const std::string& key) {
    std::vector<cplx> out;
    for (const std::string& item : split_list(s)) out.push_back(parse_complex(item, key));
    return out;
}

std::vector<std::string> parse_name_list(const std::string& s) {
    std::vector<std::string> out;
    for (const std::string& item : split_list(s))
        if (!item.empty()) out.push_back(item);
    return out;
}

using FlatConfig = std::map<std::string, std::string>;

FlatConfig read_flat(std::istream& in) {
    FlatConfig flat;
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": malformed section");
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        if (section.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": key outside a section");
        flat[section + "." + key] = trim(t.substr(eq + 1));
    }
    return flat;
}

const std::vector<std::string> kKnownKeys = {
    "scenario.type",     "scenario.eigenvalues", "scenario.eigenphases", "scenario.pre",
    "scenario.post",     "scenario.theta1",      "scenario.delta1",      "scenario.theta2",
    "scenario.delta2",   "parameters.g",         "parameters.f",         "parameters.t",
    "parameters.m",      "parameters.sigma",     "sweep.parameter",      "sweep.min",
    "sweep.max",         "sweep.count",          "sweep.spacing",        "output.quantities",
    "output.path",       "output.format",        "oracle.enabled",       "oracle.max_points",
    "oracle.adjudicate", "execution.workers",
};

SweepConfig build(const FlatConfig& flat) {
    for (const auto& [key, value] : flat) {
        (void)value;
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) == kKnownKeys.end())
            throw ConfigError("config: unknown key '" + key + "'");
    }

    auto get = [&](const std::string& key) -> std::optional<std::string> {
        const auto it = flat.find(key);
        if (it == flat.end()) return std::nullopt;
        return it->second;
    };
    auto require = [&](const std::string& key) -> std::string {
        const auto v = get(key);
        if (!v) throw ConfigError("config: missing required key '" + key + "'");
        return *v;
    };

    SweepConfig cfg;

    const std::string type = require("scenario.type");
    if (type == "generic") {
        cfg.scenario.type = ScenarioType::generic;
        cfg.scenario.eigenvalues = parse_double_list(require("scenario.eigenvalues"),
                                                     "scenario.eigenvalues");
        if (const auto v = get("scenario.eigenphases"))
            cfg.scenario.eigenphases = parse_double_list(*v, "scenario.eigenphases");
        cfg.scenario.pre_amplitudes = parse_complex_list(require("scenario.pre"), "scenario.pre");
        if (const auto v = get("scenario.post"))
            cfg.scenario.post_amplitudes = parse_complex_list(*v, "scenario.post");
    } else if (type == "stern-gerlach") {
        cfg.scenario.type = ScenarioType::stern_gerlach;
        cfg.scenario.theta1 = parse_double(require("scenario.theta1"), "scenario.theta1");
        cfg.scenario.delta1 = parse_double(require("scenario.delta1"), "scenario.delta1");
        cfg.scenario.theta2 = parse_double(require("scenario.theta2"), "scenario.theta2");
        cfg.scenario.delta2 = parse_double(require("scenario.delta2"), "scenario.delta2");
    } else {
        throw ConfigError("config: scenario.type must be generic or stern-gerlach");
    }

    if (get("parameters.g") && get("parameters.f"))
        throw ConfigError("config: give parameters.g or parameters.f, not both");
    if (const auto v = get("parameters.g")) cfg.base.g = parse_double(*v, "parameters.g");
    if (const auto v = get("parameters.f")) cfg.base.g = parse_double(*v, "parameters.f");
    if (const auto v = get("parameters.t")) cfg.base.t = parse_double(*v, "parameters.t");
    if (const auto v = get("parameters.m")) cfg.base.m = parse_double(*v, "parameters.m");
    if (const auto v = get("parameters.sigma"))
        cfg.base.sigma = parse_double(*v, "parameters.sigma");

    cfg.parameter = require("sweep.parameter");
    cfg.min = parse_double(require("sweep.min"), "sweep.min");
    cfg.max = parse_double(require("sweep.max"), "sweep.max");
    cfg.count = parse_size(require("sweep.count"), "sweep.count");
    if (const auto v = get("sweep.spacing")) {
        if (*v == "linear")
            cfg.spacing = SweepSpacing::linear;
        else if (*v == "log")
            cfg.spacing = SweepSpacing::log;
        else
            throw ConfigError("config: sweep.spacing must be linear or log");
    }

    cfg.quantities = parse_name_list(require("output.quantities"));
    if (const auto v = get("output.path")) cfg.out_path = *v;
    if (const auto v = get("output.format")) {
        if (*v == "csv")
            cfg.format = OutputFormat::csv;
        else if (*v == "json")
            cfg.format = OutputFormat::json;
        else
            throw ConfigError("config: output.format must be csv or json");
    }

    if (const auto v = get("oracle.enabled")) cfg.oracle = parse_bool(*v, "oracle.enabled");
    if (const auto v = get("oracle.max_points"))
        cfg.oracle_max_points = parse_size(*v, "oracle.max_points");
    if (const auto v = get("oracle.adjudicate"))
        cfg.adjudicate = parse_bool(*v, "oracle.adjudicate");
    if (const auto v = get("execution.workers")) cfg.workers = parse_size(*v, "execution.workers");

    cfg.validate();
    return cfg;
}

} // namespace

SpectralObservable ScenarioConfig::observable() const {
    if (type == ScenarioType::stern_gerlach) return SpectralObservable({+1.0, -1.0});
    return eigenphases.empty() ? SpectralObservable(eigenvalues)
                               : SpectralObservable(eigenvalues, eigenphases);
}

SelectionState ScenarioConfig::pre_state() const {
    if (type == ScenarioType::stern_gerlach)
        return SelectionState({std::cos(theta1), std::polar(std::sin(theta1), delta1)});
    return SelectionState(pre_amplitudes);
}

std::optional<SelectionState> ScenarioConfig::post_state() const {
    if (type == ScenarioType::stern_gerlach)
        return SelectionState({std::cos(theta2), std::polar(std::sin(theta2), delta2)});
    if (post_amplitudes.empty()) return std::nullopt;
    return SelectionState(post_amplitudes);
}

bool ScenarioConfig::has_post() const {
    return type == ScenarioType::stern_gerlach || !post_amplitudes.empty();
}

void SweepConfig::validate() const {
    base.validate();
    if (scenario.type == ScenarioType::generic) {
        // Construction performs the dimension and normalization checks.
        const SpectralObservable obs = scenario.observable();
        const SelectionState pre = scenario.pre_state();
        if (obs.dim() != pre.dim())
            throw ConfigError("config: scenario.pre length does not match eigenvalues");
        if (scenario.has_post() && scenario.post_amplitudes.size() != obs.dim())
            throw ConfigError("config: scenario.post length does not match eigenvalues");
    }

    static const std::vector<std::string> kParams = {"g", "t", "m", "sigma", "f"};
    if (std::find(kParams.begin(), kParams.end(), parameter) == kParams.end())
        throw ConfigError("config: sweep.parameter must be one of g, t, m, sigma, f");
    if (parameter == "f" && scenario.type != ScenarioType::stern_gerlach)
        throw ConfigError("config: sweep.parameter f applies to the stern-gerlach scenario");
    if (count == 0) throw ConfigError("config: sweep.count must be >= 1 (empty sweep refused)");
    if (count > 1 && !(max > min)) throw ConfigError("config: sweep.max must exceed sweep.min");
    if (spacing == SweepSpacing::log && !(min > 0.0))
        throw ConfigError("config: log spacing needs sweep.min > 0");
    if ((parameter == "m" || parameter == "sigma") && !(min > 0.0))
        throw ConfigError("config: swept " + parameter + " must stay positive");
    if (parameter == "t" && min < 0.0) throw ConfigError("config: swept t must stay >= 0");

    if (quantities.empty()) throw ConfigError("config: output.quantities is empty");
    for (const std::string& q : quantities) {
        const auto& reg = quantity_registry();
        const auto it = std::find_if(reg.begin(), reg.end(),
                                     [&](const QuantityInfo& info) { return info.name == q; });
        if (it == reg.end()) throw ConfigError("config: unknown quantity '" + q + "'");
        if (it->requires_post && !scenario.has_post())
            throw ConfigError("config: quantity '" + q + "' needs a post-selection");
        if (it->requires_oracle && !oracle)
            throw ConfigError("config: quantity '" + q + "' needs oracle.enabled = true");
    }
}

std::vector<double> SweepConfig::sweep_values() const {
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = min;
        return v;
    }
    if (spacing == SweepSpacing::linear) {
        const double step = (max - min) / static_cast<double>(count - 1);
        for (std::size_t i = 0; i < count; ++i) v[i] = min + step * static_cast<double>(i);
    } else {
        const double lmin = std::log(min), lmax = std::log(max);
        const double step = (lmax - lmin) / static_cast<double>(count - 1);
        for (std::size_t i = 0; i < count; ++i)
            v[i] = std::exp(lmin + step * static_cast<double>(i));
    }
    v.front() = min;
    v.back() = max; // endpoints pinned exactly
    return v;
}

MeasurementConfig SweepConfig::config_at(double value) const {
    MeasurementConfig cfg = base;
    if (parameter == "g" || parameter == "f")
        cfg.g = value;
    else if (parameter == "t")
        cfg.t = value;
    else if (parameter == "m")
        cfg.m = value;
    else
        cfg.sigma = value;
    return cfg;
}

SweepConfig parse_sweep_config(std::istream& in, const std::vector<std::string>& overrides) {
    FlatConfig flat = read_flat(in);
    for (const std::string& ov : overrides) {
        const std::size_t eq = ov.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects section.key=value, got '" + ov + "'");
        const std::string key = trim(ov.substr(0, eq));
        if (key.find('.') == std::string::npos)
            throw ConfigError("--set key must be section.key, got '" + key + "'");
        flat[key] = trim(ov.substr(eq + 1));
    }
    return build(flat);
}

SweepConfig load_sweep_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    return parse_sweep_config(in, overrides);
}

} // namespace pointersim
