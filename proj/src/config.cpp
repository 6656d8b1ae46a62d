#include "cslprobe/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "cslprobe/errors.hpp"

namespace cslprobe {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reads the members of one JSON object, remembering which keys were consumed so
// that leftovers can be reported as unknown.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ConfigError(path_, "expected an object");
    }

    const json* find(const std::string& key) {
        seen_.insert(key);
        auto it = node_.find(key);
        return it == node_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out) {
        if (const auto* v = find(key)) {
            if (!v->is_number()) throw ConfigError(field(key), "expected a number");
            out = v->get<double>();
        }
    }

    void boolean(const std::string& key, bool& out) {
        if (const auto* v = find(key)) {
            if (!v->is_boolean()) throw ConfigError(field(key), "expected true or false");
            out = v->get<bool>();
        }
    }

    void string(const std::string& key, std::string& out) {
        if (const auto* v = find(key)) {
            if (!v->is_string()) throw ConfigError(field(key), "expected a string");
            out = v->get<std::string>();
        }
    }

    void cutoffs(const std::string& key, std::array<int, 3>& out) {
        if (const auto* v = find(key)) {
            if (!v->is_array() || v->size() != 3) {
                throw ConfigError(field(key), "expected an array of three integers");
            }
            for (std::size_t i = 0; i < 3; ++i) {
                if (!(*v)[i].is_number_integer()) {
                    throw ConfigError(field(key), "expected an array of three integers");
                }
                out[i] = (*v)[i].get<int>();
            }
        }
    }

    void grid(const std::string& key, GridSpec& out) {
        if (const auto* v = find(key)) out = read_grid(*v, field(key));
    }

    void finish() const {
        for (const auto& [key, value] : node_.items()) {
            if (!seen_.count(key)) throw ConfigError(field(key), "unknown key");
        }
    }

    std::string field(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    static GridSpec read_grid(const json& v, const std::string& path) {
        if (v.is_string()) return parse_grid(v.get<std::string>(), path);
        Section s(v, path);
        GridSpec g;
        s.number("start", g.start);
        s.number("stop", g.stop);
        double count = 0.0;
        s.number("count", count);
        if (count < 1.0 || count != std::floor(count)) {
            throw ConfigError(s.field("count"), "must be a positive integer");
        }
        g.count = static_cast<std::size_t>(count);
        std::string scale = "linear";
        s.string("scale", scale);
        if (scale != "linear" && scale != "log") {
            throw ConfigError(s.field("scale"), "must be \"linear\" or \"log\"");
        }
        g.log = scale == "log";
        s.finish();
        return g;
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& field, const std::string& message) {
    if (!ok) throw ConfigError(field, message);
}

void nonnegative(double v, const std::string& field) {
    require(std::isfinite(v) && v >= 0.0, field, "must be finite and nonnegative");
}

void positive(double v, const std::string& field) {
    require(std::isfinite(v) && v > 0.0, field, "must be finite and positive");
}

void fraction(double v, const std::string& field) {
    require(v >= 0.0 && v <= 1.0, field, "must lie in [0, 1]");
}

std::size_t line_of(const std::string& text, std::size_t byte) {
    const auto end = text.begin() + static_cast<std::ptrdiff_t>(std::min(byte, text.size()));
    return 1 + static_cast<std::size_t>(std::count(text.begin(), end, '\n'));
}

json grid_json(const GridSpec& g) {
    return {{"start", g.start}, {"stop", g.stop}, {"count", g.count},
            {"scale", g.log ? "log" : "linear"}};
}

}  // namespace

SystemParams SystemConfig::to_params() const {
    SystemParams p;
    p.omega = kTwoPi * omega;
    p.gamma = kTwoPi * gamma;
    p.g0 = kTwoPi * g0;
    p.kappa_p0 = kTwoPi * kappa_p0;
    p.kappa_p_ex = kTwoPi * kappa_p_ex;
    p.kappa_s0 = kTwoPi * kappa_s0;
    p.kappa_s_ex = kTwoPi * kappa_s_ex;
    p.n_th = bose_occupancy(p.omega, temperature);
    p.rwa = rwa;
    return p;
}

double SystemConfig::x0() const { return zero_point_motion(m_eff, kTwoPi * omega); }

ResonatorGeometry GeometryConfig::to_geometry() const {
    if (shape == "sphere") return Sphere{R, density};
    return Cuboid{L1, L2, L3, density};
}

CollapseParams CollapseConfig::to_params() const {
    CollapseParams p;
    p.lambda_c = lambda_c;
    p.r_c = r_c;
    if (model == "dp") {
        p.model = DiosiPenroseModel{r_dp, lattice_a};
    } else if (model == "grw") {
        p.model = GrwLinearModel{lambda_grw};
    }
    return p;
}

FilterParams FilterConfig::to_params() const {
    return {kTwoPi * kappa_f0, kTwoPi * kappa_f_in, kTwoPi * kappa_f_out, cavity_length};
}

AbsorptionParams AbsorptionConfig::to_params() const { return {n_abs_base, kTwoPi * kappa}; }

QuadraticParams QuadraticConfig::to_params() const {
    return {kTwoPi * g0_2, n_cav, kTwoPi * kappa, kTwoPi * gamma, kTwoPi * g_linear};
}

std::vector<double> GridSpec::values() const {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        out[i] = log ? std::exp(std::log(start) + f * (std::log(stop) - std::log(start)))
                     : start + f * (stop - start);
    }
    if (count > 1) out.back() = stop;
    return out;
}

void GridSpec::validate(const std::string& field) const {
    require(count >= 1, field, "count must be at least 1");
    require(std::isfinite(start) && std::isfinite(stop), field, "bounds must be finite");
    if (log) require(start > 0.0 && stop > 0.0, field, "log grid bounds must be positive");
}

GridSpec parse_grid(const std::string& text, const std::string& field) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() < 3 || parts.size() > 4) {
        throw ConfigError(field, "expected start:stop:count[:log|:linear], got \"" + text + "\"");
    }
    GridSpec g;
    try {
        std::size_t used = 0;
        g.start = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument("start");
        g.stop = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("stop");
        const long count = std::stol(parts[2], &used);
        if (used != parts[2].size() || count < 1) throw std::invalid_argument("count");
        g.count = static_cast<std::size_t>(count);
    } catch (const std::exception&) {
        throw ConfigError(field, "malformed grid \"" + text + "\"");
    }
    if (parts.size() == 4) {
        if (parts[3] == "log") {
            g.log = true;
        } else if (parts[3] != "linear") {
            throw ConfigError(field, "grid scale must be log or linear");
        }
    }
    g.validate(field);
    return g;
}

void RunConfig::validate() const {
    const auto& s = system;
    positive(s.omega, "system.omega");
    nonnegative(s.gamma, "system.gamma");
    nonnegative(s.g0, "system.g0");
    nonnegative(s.kappa_p0, "system.kappa_p0");
    nonnegative(s.kappa_p_ex, "system.kappa_p_ex");
    nonnegative(s.kappa_s0, "system.kappa_s0");
    nonnegative(s.kappa_s_ex, "system.kappa_s_ex");
    positive(s.kappa_p0 + s.kappa_p_ex, "system.kappa_p_ex");
    positive(s.kappa_s0 + s.kappa_s_ex, "system.kappa_s_ex");
    nonnegative(s.temperature, "system.temperature");
    positive(s.m_eff, "system.m_eff");

    require(geometry.shape == "cuboid" || geometry.shape == "sphere", "geometry.shape",
            "must be \"cuboid\" or \"sphere\"");
    if (geometry.shape == "cuboid") {
        positive(geometry.L1, "geometry.L1");
        positive(geometry.L2, "geometry.L2");
        positive(geometry.L3, "geometry.L3");
    } else {
        positive(geometry.R, "geometry.R");
    }
    positive(geometry.density, "geometry.density");

    require(collapse.model == "csl" || collapse.model == "dp" || collapse.model == "grw",
            "collapse.model", "must be csl, dp or grw");
    positive(collapse.lambda_c, "collapse.lambda_c");
    positive(collapse.r_c, "collapse.r_c");
    nonnegative(collapse.r_dp, "collapse.r_dp");
    positive(collapse.lattice_a, "collapse.lattice_a");
    nonnegative(collapse.lambda_grw, "collapse.lambda_grw");

    nonnegative(eta_p, "probe.eta_p");
    require(eta_p <= 0.1, "probe.eta_p", "must not exceed 0.1 (weak-probe assumption)");

    nonnegative(filter.kappa_f0, "filter.kappa_f0");
    nonnegative(filter.kappa_f_in, "filter.kappa_f_in");
    nonnegative(filter.kappa_f_out, "filter.kappa_f_out");
    positive(filter.kappa_f0 + filter.kappa_f_in + filter.kappa_f_out, "filter.kappa_f0");
    positive(filter.cavity_length, "filter.cavity_length");
    require(constants::c_light / (2.0 * filter.cavity_length) >
                filter.kappa_f0 + filter.kappa_f_in + filter.kappa_f_out,
            "filter.cavity_length", "free spectral range must exceed the loaded linewidth");

    fraction(detection.eta_chi, "detection.eta_chi");
    fraction(detection.eta_d1, "detection.eta_d1");
    nonnegative(detection.R_d1, "detection.R_d1");
    nonnegative(detection.tau_c, "detection.tau_c");

    nonnegative(absorption.n_abs_base, "absorption.n_abs_base");
    positive(absorption.kappa, "absorption.kappa");

    nonnegative(quadratic.g0_2, "quadratic.g0_2");
    positive(quadratic.n_cav, "quadratic.n_cav");
    positive(quadratic.kappa, "quadratic.kappa");
    positive(quadratic.gamma, "quadratic.gamma");
    nonnegative(quadratic.g_linear, "quadratic.g_linear");

    heatmap.diameters.validate("heatmap.diameters");
    require(heatmap.diameters.start > 0.0, "heatmap.diameters", "diameters must be positive");
    require(!heatmap.temperatures.empty(), "heatmap.temperatures", "must not be empty");
    for (double t : heatmap.temperatures) nonnegative(t, "heatmap.temperatures");
    positive(heatmap.Q, "heatmap.Q");
    positive(heatmap.c_sound, "heatmap.c_sound");
    positive(heatmap.density, "heatmap.density");

    for (int c : numerics.cutoffs) require(c >= 2, "numerics.cutoffs", "each cutoff must be >= 2");
    require(numerics.eta_om2_cutoffs[0] >= 3, "numerics.eta_om2_cutoffs",
            "phonon cutoff must be >= 3");
    for (int c : numerics.eta_om2_cutoffs) {
        require(c >= 2, "numerics.eta_om2_cutoffs", "each cutoff must be >= 2");
    }
    positive(numerics.t0_factor, "numerics.t0_factor");

    require(multiplex_n >= 1.0, "multiplex_n", "must be >= 1");
    for (std::size_t i = 0; i < sweeps.size(); ++i) {
        const std::string f = "sweeps[" + std::to_string(i) + "]";
        require(sweeps[i].name == "g0_over_kappa_p" || sweeps[i].name == "kappa_s_ex_over_kappa_p",
                f + ".name", "must be g0_over_kappa_p or kappa_s_ex_over_kappa_p");
        sweeps[i].grid.validate(f + ".grid");
    }
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    const bool blank = std::all_of(text.begin(), text.end(),
                                   [](unsigned char ch) { return std::isspace(ch) != 0; });
    if (blank) {
        c.validate();
        return c;
    }
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ConfigError("", "parse error at line " + std::to_string(line) + ": " + e.what());
    }

    Section root(doc, "");
    if (const auto* v = root.find("system")) {
        Section s(*v, "system");
        auto& y = c.system;
        s.number("omega", y.omega);
        s.number("gamma", y.gamma);
        s.number("g0", y.g0);
        s.number("kappa_p0", y.kappa_p0);
        s.number("kappa_p_ex", y.kappa_p_ex);
        s.number("kappa_s0", y.kappa_s0);
        s.number("kappa_s_ex", y.kappa_s_ex);
        s.number("temperature", y.temperature);
        s.number("m_eff", y.m_eff);
        s.boolean("rwa", y.rwa);
        s.finish();
    }
    if (const auto* v = root.find("geometry")) {
        Section s(*v, "geometry");
        auto& g = c.geometry;
        s.string("shape", g.shape);
        s.number("L1", g.L1);
        s.number("L2", g.L2);
        s.number("L3", g.L3);
        s.number("R", g.R);
        s.number("density", g.density);
        s.finish();
    }
    if (const auto* v = root.find("collapse")) {
        Section s(*v, "collapse");
        auto& k = c.collapse;
        s.string("model", k.model);
        s.number("lambda_c", k.lambda_c);
        s.number("r_c", k.r_c);
        s.number("r_dp", k.r_dp);
        s.number("lattice_a", k.lattice_a);
        s.number("lambda_grw", k.lambda_grw);
        s.finish();
    }
    if (const auto* v = root.find("probe")) {
        Section s(*v, "probe");
        s.number("eta_p", c.eta_p);
        s.finish();
    }
    if (const auto* v = root.find("filter")) {
        Section s(*v, "filter");
        s.number("kappa_f0", c.filter.kappa_f0);
        s.number("kappa_f_in", c.filter.kappa_f_in);
        s.number("kappa_f_out", c.filter.kappa_f_out);
        s.number("cavity_length", c.filter.cavity_length);
        s.finish();
    }
    if (const auto* v = root.find("detection")) {
        Section s(*v, "detection");
        s.number("eta_chi", c.detection.eta_chi);
        s.number("eta_d1", c.detection.eta_d1);
        s.number("R_d1", c.detection.R_d1);
        s.number("tau_c", c.detection.tau_c);
        s.finish();
    }
    if (const auto* v = root.find("absorption")) {
        Section s(*v, "absorption");
        s.number("n_abs_base", c.absorption.n_abs_base);
        s.number("kappa", c.absorption.kappa);
        s.finish();
    }
    if (const auto* v = root.find("quadratic")) {
        Section s(*v, "quadratic");
        s.number("g0_2", c.quadratic.g0_2);
        s.number("n_cav", c.quadratic.n_cav);
        s.number("kappa", c.quadratic.kappa);
        s.number("gamma", c.quadratic.gamma);
        s.number("g_linear", c.quadratic.g_linear);
        s.finish();
    }
    if (const auto* v = root.find("heatmap")) {
        Section s(*v, "heatmap");
        s.grid("diameters", c.heatmap.diameters);
        if (const auto* t = s.find("temperatures")) {
            if (!t->is_array()) throw ConfigError("heatmap.temperatures", "expected an array");
            c.heatmap.temperatures.clear();
            for (const auto& e : *t) {
                if (!e.is_number()) throw ConfigError("heatmap.temperatures", "expected numbers");
                c.heatmap.temperatures.push_back(e.get<double>());
            }
        }
        s.number("Q", c.heatmap.Q);
        s.number("c_sound", c.heatmap.c_sound);
        s.number("density", c.heatmap.density);
        s.finish();
    }
    if (const auto* v = root.find("numerics")) {
        Section s(*v, "numerics");
        s.cutoffs("cutoffs", c.numerics.cutoffs);
        s.cutoffs("eta_om2_cutoffs", c.numerics.eta_om2_cutoffs);
        s.number("t0_factor", c.numerics.t0_factor);
        s.boolean("check_cutoff", c.numerics.check_cutoff);
        s.finish();
    }
    root.number("multiplex_n", c.multiplex_n);
    root.boolean("paper_values", c.paper_values);
    if (const auto* v = root.find("sweeps")) {
        if (!v->is_array()) throw ConfigError("sweeps", "expected an array");
        for (std::size_t i = 0; i < v->size(); ++i) {
            const std::string path = "sweeps[" + std::to_string(i) + "]";
            Section s((*v)[i], path);
            SweepSpec spec;
            s.string("name", spec.name);
            s.grid("grid", spec.grid);
            s.finish();
            c.sweeps.push_back(spec);
        }
    }
    if (const auto* v = root.find("output")) {
        Section s(*v, "output");
        s.string("dir", c.output.dir);
        s.finish();
    }
    root.finish();
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

json to_json(const RunConfig& c) {
    const auto& y = c.system;
    const auto& g = c.geometry;
    const auto& k = c.collapse;
    json sweeps = json::array();
    for (const auto& s : c.sweeps) sweeps.push_back({{"name", s.name}, {"grid", grid_json(s.grid)}});
    return {
        {"system",
         {{"omega", y.omega},
          {"gamma", y.gamma},
          {"g0", y.g0},
          {"kappa_p0", y.kappa_p0},
          {"kappa_p_ex", y.kappa_p_ex},
          {"kappa_s0", y.kappa_s0},
          {"kappa_s_ex", y.kappa_s_ex},
          {"temperature", y.temperature},
          {"m_eff", y.m_eff},
          {"rwa", y.rwa}}},
        {"geometry",
         {{"shape", g.shape}, {"L1", g.L1}, {"L2", g.L2}, {"L3", g.L3}, {"R", g.R},
          {"density", g.density}}},
        {"collapse",
         {{"model", k.model},
          {"lambda_c", k.lambda_c},
          {"r_c", k.r_c},
          {"r_dp", k.r_dp},
          {"lattice_a", k.lattice_a},
          {"lambda_grw", k.lambda_grw}}},
        {"probe", {{"eta_p", c.eta_p}}},
        {"filter",
         {{"kappa_f0", c.filter.kappa_f0},
          {"kappa_f_in", c.filter.kappa_f_in},
          {"kappa_f_out", c.filter.kappa_f_out},
          {"cavity_length", c.filter.cavity_length}}},
        {"detection",
         {{"eta_chi", c.detection.eta_chi},
          {"eta_d1", c.detection.eta_d1},
          {"R_d1", c.detection.R_d1},
          {"tau_c", c.detection.tau_c}}},
        {"absorption", {{"n_abs_base", c.absorption.n_abs_base}, {"kappa", c.absorption.kappa}}},
        {"quadratic",
         {{"g0_2", c.quadratic.g0_2},
          {"n_cav", c.quadratic.n_cav},
          {"kappa", c.quadratic.kappa},
          {"gamma", c.quadratic.gamma},
          {"g_linear", c.quadratic.g_linear}}},
        {"heatmap",
         {{"diameters", grid_json(c.heatmap.diameters)},
          {"temperatures", c.heatmap.temperatures},
          {"Q", c.heatmap.Q},
          {"c_sound", c.heatmap.c_sound},
          {"density", c.heatmap.density}}},
        {"numerics",
         {{"cutoffs", c.numerics.cutoffs},
          {"eta_om2_cutoffs", c.numerics.eta_om2_cutoffs},
          {"t0_factor", c.numerics.t0_factor},
          {"check_cutoff", c.numerics.check_cutoff}}},
        {"multiplex_n", c.multiplex_n},
        {"paper_values", c.paper_values},
        {"sweeps", sweeps},
        {"output", {{"dir", c.output.dir}}},
    };
}

}  // namespace cslprobe
