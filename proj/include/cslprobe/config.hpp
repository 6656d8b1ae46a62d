#pragma once

// Run configuration. One JSON document; frequencies in Hz (converted to rad/s
// on the way in), lengths in m, temperatures in K, masses in kg. Every field
// has a default, so an empty document describes the reference device.

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "cslprobe/budget.hpp"
#include "cslprobe/collapse.hpp"
#include "cslprobe/lindblad.hpp"
#include "cslprobe/scenarios.hpp"

namespace cslprobe {

struct SystemConfig {
    double omega = 5.3e9;       // Hz
    double gamma = 0.108;       // Hz
    double g0 = 11.5e6;         // Hz
    double kappa_p0 = 9.2e6;    // Hz
    double kappa_p_ex = 2.2e6;  // Hz
    double kappa_s0 = 9.2e6;    // Hz
    double kappa_s_ex = 21e6;   // Hz
    double temperature = 0.01;  // K
    double m_eff = 136e-18;     // kg
    bool rwa = true;

    SystemParams to_params() const;
    double x0() const;
};

struct GeometryConfig {
    std::string shape = "cuboid";
    double L1 = 1.21e-6;
    double L2 = 0.22e-6;
    double L3 = 0.22e-6;
    double R = 0.0;
    double density = constants::silicon_density;

    ResonatorGeometry to_geometry() const;
};

struct CollapseConfig {
    std::string model = "csl";
    double lambda_c = 1e-12;  // 1/s
    double r_c = 1e-7;        // m
    double r_dp = 0.0;        // m, 0 = derive from the noise budget
    double lattice_a = constants::silicon_lattice;
    double lambda_grw = 1e-16;

    CollapseParams to_params() const;
};

struct FilterConfig {
    double kappa_f0 = 30e3;     // Hz
    double kappa_f_in = 45e3;   // Hz
    double kappa_f_out = 45e3;  // Hz
    double cavity_length = 0.01;

    FilterParams to_params() const;
};

struct AbsorptionConfig {
    double n_abs_base = 10.0;
    double kappa = 575e6;  // Hz

    AbsorptionParams to_params() const;
};

struct QuadraticConfig {
    double g0_2 = 28.0;      // Hz
    double n_cav = 100.0;
    double kappa = 575e6;    // Hz
    double gamma = 0.108;    // Hz
    double g_linear = 0.0;   // Hz

    QuadraticParams to_params() const;
};

/// start:stop:count with linear or logarithmic spacing.
struct GridSpec {
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 0;
    bool log = false;

    std::vector<double> values() const;
    void validate(const std::string& field) const;
};

/// Parses "start:stop:count[:log|:linear]".
GridSpec parse_grid(const std::string& text, const std::string& field = "grid");

struct SweepSpec {
    std::string name;  ///< parameter swept
    GridSpec grid;
};

struct HeatmapConfig {
    GridSpec diameters{1e-8, 1e-4, 81, true};
    std::vector<double> temperatures{0.01, 300.0};
    double Q = 1e7;
    double c_sound = constants::silica_sound_speed;
    double density = constants::silica_density;
};

struct NumericsConfig {
    std::array<int, 3> cutoffs{2, 2, 2};
    std::array<int, 3> eta_om2_cutoffs{3, 2, 2};
    double t0_factor = 10.0;
    /// Rerun every efficiency scenario with all cutoffs + 1 and require < 1e-3 relative change.
    bool check_cutoff = true;
};

struct OutputConfig {
    std::string dir;  ///< empty = CSLPROBE_OUT or "."
};

struct RunConfig {
    SystemConfig system;
    GeometryConfig geometry;
    CollapseConfig collapse;
    double eta_p = 0.01;
    FilterConfig filter;
    DetectionParams detection;
    AbsorptionConfig absorption;
    QuadraticConfig quadratic;
    HeatmapConfig heatmap;
    NumericsConfig numerics;
    double multiplex_n = 1.0;
    bool paper_values = false;
    std::vector<SweepSpec> sweeps;
    OutputConfig output;

    /// Throws ConfigError naming the first offending field.
    void validate() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Resolved configuration in the input units; keys are sorted, so dumps are stable.
nlohmann::json to_json(const RunConfig& config);

}  // namespace cslprobe
