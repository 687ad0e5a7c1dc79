#pragma once

// File formats: code JSON, GaRun / MetricsReport / SeReport / SeBounds JSON,
// CSV tables, flat key = value scenario files, and angle strings with units.

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ris/array_model.hpp"
#include "ris/error.hpp"
#include "ris/ga.hpp"
#include "ris/metrics.hpp"
#include "ris/se_sim.hpp"

namespace ris::io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- numbers

/// 10 significant digits, '.' decimal separator regardless of locale.
inline std::string fmt_num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    std::string s(buf);
    for (auto& c : s)
        if (c == ',') c = '.';
    return s;
}

inline double db_or_floor(double linear) { return linear < kLinearFloor ? kDbFloor : to_db(linear); }

/// Parses "30deg", "0.5236rad" or a bare number (radians).
inline double parse_angle(std::string_view text) {
    std::string s(text);
    double scale = 1.0;
    auto ends_with = [&](std::string_view suf) {
        return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
    };
    if (ends_with("deg")) {
        scale = kPi / 180.0;
        s.resize(s.size() - 3);
    } else if (ends_with("rad")) {
        s.resize(s.size() - 3);
    }
    if (s.empty()) throw InvalidInput("empty angle '" + std::string(text) + "'");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
        throw InvalidInput("cannot parse angle '" + std::string(text) + "' (use e.g. 30deg or 0.5236rad)");
    return v * scale;
}

// ---------------------------------------------------------------- files

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw std::runtime_error("failed writing " + path.string());
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot open " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

/// Parses JSON text; syntax errors report line and column.
inline json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InvalidInput(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
    }
}

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) {
        row_strings(header);
    }
    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            if (!first) out_ << ',';
            out_ << fmt_num(v);
            first = false;
        }
        out_ << '\n';
    }
    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << fmt_num(values[i]);
        out_ << '\n';
    }
    void row_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << '\n';
    }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

// ---------------------------------------------------------------- codes

struct CodeFile {
    PhaseCode code;
    int m = 0;
    double theta_h_design = 0.0;
    double spacing_ratio = 0.5;
    std::string family;
    json params = json::object();

    ArrayGeometry geometry() const { return {m, spacing_ratio, theta_h_design}; }
};

inline json to_json(const CodeFile& c) {
    json phases = json::array();
    for (double p : c.code.phases()) phases.push_back(p);
    return json{{"m", c.m},
                {"theta_h_design", c.theta_h_design},
                {"spacing_ratio", c.spacing_ratio},
                {"phases_rad", phases},
                {"family", c.family},
                {"params", c.params}};
}

namespace detail {

template <typename T>
T field(const json& j, const char* name, const std::string& origin) {
    if (!j.contains(name)) throw InvalidInput(origin + ": missing field '" + name + "'");
    try {
        return j.at(name).get<T>();
    } catch (const json::exception&) {
        throw InvalidInput(origin + ": field '" + std::string(name) + "' has the wrong type");
    }
}

}  // namespace detail

inline CodeFile code_from_json(const json& j, const std::string& origin = "code") {
    if (!j.is_object()) throw InvalidInput(origin + ": top-level value must be an object");
    CodeFile c;
    c.m = detail::field<int>(j, "m", origin);
    c.theta_h_design = detail::field<double>(j, "theta_h_design", origin);
    c.spacing_ratio = detail::field<double>(j, "spacing_ratio", origin);
    c.family = detail::field<std::string>(j, "family", origin);
    if (j.contains("params")) c.params = j.at("params");
    const auto& ph = j.contains("phases_rad") ? j.at("phases_rad") : throw InvalidInput(origin + ": missing field 'phases_rad'");
    if (!ph.is_array()) throw InvalidInput(origin + ": field 'phases_rad' must be an array");
    std::vector<double> phases;
    for (std::size_t i = 0; i < ph.size(); ++i) {
        if (!ph[i].is_number())
            throw InvalidInput(origin + ": phases_rad[" + std::to_string(i) + "] is not a number");
        phases.push_back(ph[i].get<double>());
    }
    if (static_cast<int>(phases.size()) != c.m)
        throw InvalidInput(origin + ": field 'm' = " + std::to_string(c.m) + " but phases_rad has " +
                           std::to_string(phases.size()) + " entries");
    try {
        c.code = PhaseCode(std::move(phases));
        (void)c.geometry();
    } catch (const InvalidInput& e) {
        throw InvalidInput(origin + ": " + e.what());
    }
    return c;
}

inline CodeFile read_code_file(const std::filesystem::path& path) {
    return code_from_json(parse_json(read_text(path), path.string()), path.string());
}

// ---------------------------------------------------------------- GA

inline json to_json(const GaConfig& c) {
    return json{{"population_size", c.population_size},
                {"generations", c.generations},
                {"grid_d", c.grid_d},
                {"crossover_weight", {{"distribution", "uniform"}, {"lo", c.crossover_weight_lo}, {"hi", c.crossover_weight_hi}}},
                {"mutation_scale", c.mutation_scale},
                {"mutation_prob", c.mutation_prob},
                {"seed", c.seed},
                {"elitism_count", c.elitism_count}};
}

inline GaConfig ga_config_from_json(const json& j) {
    GaConfig c;
    c.population_size = j.at("population_size").get<int>();
    c.generations = j.at("generations").get<int>();
    c.grid_d = j.at("grid_d").get<int>();
    c.crossover_weight_lo = j.at("crossover_weight").at("lo").get<double>();
    c.crossover_weight_hi = j.at("crossover_weight").at("hi").get<double>();
    c.mutation_scale = j.at("mutation_scale").get<double>();
    c.mutation_prob = j.at("mutation_prob").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.elitism_count = j.at("elitism_count").get<int>();
    return c;
}

inline json to_json(const GaRun& r) {
    json phases = json::array();
    for (double p : r.best_code.phases()) phases.push_back(p);
    json gen = json::array(), best = json::array(), gbest = json::array();
    for (const auto& t : r.trace) {
        gen.push_back(t.generation);
        best.push_back(t.best_so_far);
        gbest.push_back(t.generation_best);
    }
    return json{{"best_phases_rad", phases},
                {"best_fitness_linear", r.best_fitness},
                {"best_fitness_db", db_or_floor(r.best_fitness)},
                {"uniform_selection_generations", r.uniform_selection_generations},
                {"config", to_json(r.config)},
                {"trace", {{"generation", gen}, {"best_so_far_linear", best}, {"generation_best_linear", gbest}}}};
}

// ---------------------------------------------------------------- metrics

inline json geometry_json(const ArrayGeometry& g) {
    return json{{"m", g.m()}, {"spacing_ratio", g.spacing_ratio()}, {"theta_h", g.theta_h()}};
}

inline json to_json(const MetricsReport& r) {
    json j{{"a_min_db", r.a_min_db},
           {"a_min_floored", r.a_min_floored},
           {"a_min_linear", r.a_min_linear},
           {"a_avg_linear", r.a_avg_linear},
           {"a_avg_numeric", r.a_avg_numeric},
           {"u_half", r.u_half ? json(*r.u_half) : json(nullptr)},
           {"grid_d", r.grid_d},
           {"geometry", {{"m", r.m}, {"spacing_ratio", r.spacing_ratio}, {"theta_h", r.theta_h}}}};
    return j;
}

// ---------------------------------------------------------------- scenarios

inline json to_json(const SimScenario& s) {
    return json{{"tx_power_dbm", s.tx_power_dbm},
                {"noise_power_dbm", s.noise_power_dbm},
                {"r_h_m", s.r_h_m},
                {"r_min_m", s.r_min_m},
                {"r_max_m", s.r_max_m},
                {"theta_min", s.theta_min},
                {"theta_max", s.theta_max},
                {"ue_count", s.ue_count},
                {"pattern_peak_gain_dbi", s.pattern.peak_gain_dbi},
                {"pattern_theta0", s.pattern.theta0},
                {"pattern_delta_theta", s.pattern.delta_theta},
                {"pattern_floor_db", s.pattern.floor_db},
                {"path_loss_intercept_db", s.path_loss_intercept_db},
                {"path_loss_exponent_coeff", s.path_loss_exponent_coeff},
                {"seed", s.seed}};
}

/// Sets one scenario field by its flat name. Angles accept unit suffixes.
inline void set_scenario_field(SimScenario& s, const std::string& key, const std::string& value) {
    auto num = [&](const std::string& v) {
        char* end = nullptr;
        const double d = std::strtod(v.c_str(), &end);
        if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(d))
            throw InvalidInput("scenario field '" + key + "': cannot parse '" + v + "'");
        return d;
    };
    if (key == "tx_power_dbm") s.tx_power_dbm = num(value);
    else if (key == "noise_power_dbm") s.noise_power_dbm = num(value);
    else if (key == "r_h_m") s.r_h_m = num(value);
    else if (key == "r_min_m") s.r_min_m = num(value);
    else if (key == "r_max_m") s.r_max_m = num(value);
    else if (key == "theta_min") s.theta_min = parse_angle(value);
    else if (key == "theta_max") s.theta_max = parse_angle(value);
    else if (key == "ue_count") {
        const double d = num(value);
        if (d != std::floor(d) || d > 1e9) throw InvalidInput("scenario field 'ue_count' must be an integer");
        s.ue_count = static_cast<int>(d);
    } else if (key == "pattern_peak_gain_dbi") s.pattern.peak_gain_dbi = num(value);
    else if (key == "pattern_theta0") s.pattern.theta0 = parse_angle(value);
    else if (key == "pattern_delta_theta") s.pattern.delta_theta = parse_angle(value);
    else if (key == "pattern_floor_db") s.pattern.floor_db = num(value);
    else if (key == "path_loss_intercept_db") s.path_loss_intercept_db = num(value);
    else if (key == "path_loss_exponent_coeff") s.path_loss_exponent_coeff = num(value);
    else if (key == "seed") {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
        if (value.empty() || end != value.c_str() + value.size()) throw InvalidInput("scenario field 'seed' must be an unsigned integer");
        s.seed = v;
    } else
        throw InvalidInput("unknown scenario field '" + key + "'");
}

inline SimScenario scenario_from_json(const json& j) {
    SimScenario s;
    s.tx_power_dbm = j.at("tx_power_dbm").get<double>();
    s.noise_power_dbm = j.at("noise_power_dbm").get<double>();
    s.r_h_m = j.at("r_h_m").get<double>();
    s.r_min_m = j.at("r_min_m").get<double>();
    s.r_max_m = j.at("r_max_m").get<double>();
    s.theta_min = j.at("theta_min").get<double>();
    s.theta_max = j.at("theta_max").get<double>();
    s.ue_count = j.at("ue_count").get<int>();
    s.pattern.peak_gain_dbi = j.at("pattern_peak_gain_dbi").get<double>();
    s.pattern.theta0 = j.at("pattern_theta0").get<double>();
    s.pattern.delta_theta = j.at("pattern_delta_theta").get<double>();
    s.pattern.floor_db = j.at("pattern_floor_db").get<double>();
    s.path_loss_intercept_db = j.at("path_loss_intercept_db").get<double>();
    s.path_loss_exponent_coeff = j.at("path_loss_exponent_coeff").get<double>();
    s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

/// Flat config: one `key = value` per line, '#' starts a comment, optional
/// `preset = paper-sim|prop1` applied before the other keys.
inline SimScenario parse_scenario_text(const std::string& text, const std::string& origin = "scenario") {
    std::map<std::string, std::pair<std::string, int>> entries;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    std::vector<std::string> order;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InvalidInput(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (entries.contains(key)) throw InvalidInput(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        entries[key] = {value, lineno};
        order.push_back(key);
    }
    SimScenario s;
    if (const auto it = entries.find("preset"); it != entries.end()) {
        if (it->second.first == "prop1") s = SimScenario::prop1();
        else if (it->second.first != "paper-sim")
            throw InvalidInput(origin + ":" + std::to_string(it->second.second) + ": unknown preset '" + it->second.first + "'");
    }
    for (const auto& key : order) {
        if (key == "preset") continue;
        const auto& [value, ln] = entries.at(key);
        try {
            set_scenario_field(s, key, value);
        } catch (const InvalidInput& e) {
            throw InvalidInput(origin + ":" + std::to_string(ln) + ": " + e.what());
        }
    }
    return s;
}

inline json to_json(const SeReport& r, bool include_ecdf = true) {
    json j{{"s_min", r.s_min},
           {"s_mean", r.s_mean},
           {"std_error", r.std_error},
           {"ci95", {r.ci95_low, r.ci95_high}},
           {"sample_count", r.sample_count},
           {"scenario", to_json(r.scenario)}};
    if (include_ecdf) {
        json se = json::array(), cdf = json::array();
        for (const auto& p : r.ecdf) {
            se.push_back(p.se);
            cdf.push_back(p.cdf);
        }
        j["ecdf"] = {{"se_bps_hz", se}, {"cdf", cdf}};
    }
    return j;
}

inline json to_json(const SeBounds& b) {
    return json{{"lower", b.lower}, {"upper", b.upper}, {"epsilon_note", b.epsilon_note}};
}

inline std::string ecdf_csv(const SeReport& r) {
    CsvWriter w({"se_bps_hz", "cdf"});
    for (const auto& p : r.ecdf) w.row({p.se, p.cdf});
    return w.str();
}

inline std::string profile_csv(const std::vector<ProfilePoint>& prof) {
    CsvWriter w({"theta_rad", "pdaf_linear", "pdaf_db"});
    for (const auto& p : prof) w.row({p.theta, p.gain, db_or_floor(p.gain)});
    return w.str();
}

inline std::string acf_csv(const AcfSequence& a) {
    CsvWriter w({"lag", "re", "im"});
    const int l = a.max_lag();
    for (int tau = -l; tau <= l; ++tau) {
        const cplx v = a.at(tau);
        w.row({static_cast<double>(tau), v.real(), v.imag()});
    }
    return w.str();
}

}  // namespace ris::io
