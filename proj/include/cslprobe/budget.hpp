#pragma once

// Noise budget: probe occupancy, filter, detection chain, coincidence rates,
// minimum testable collapse rate, measurement time, exclusion curve and the
// quadratic-coupling feasibility numbers. All rates in rad/s or 1/s.

#include <optional>
#include <string>
#include <vector>

#include "cslprobe/collapse.hpp"
#include "cslprobe/lindblad.hpp"
#include "cslprobe/parallel.hpp"

namespace cslprobe {

struct FilterParams {
    double kappa_f0 = 0.0;      ///< rad/s
    double kappa_f_in = 0.0;    ///< rad/s
    double kappa_f_out = 0.0;   ///< rad/s
    double cavity_length = 0.0; ///< m

    double kappa_f() const noexcept { return kappa_f0 + kappa_f_in + kappa_f_out; }
    /// 2 pi c / 2L.
    double omega_fsr() const;
    double finesse() const { return omega_fsr() / kappa_f(); }
    void validate() const;
};

struct DetectionParams {
    double eta_chi = 0.95;
    double eta_d1 = 0.80;
    double R_d1 = 3.5;      ///< 1/s
    double tau_c = 30e-12;  ///< s

    double eta_d() const noexcept { return eta_d1 * eta_d1; }
    void validate() const;
};

struct AbsorptionParams {
    double n_abs_base = 10.0;  ///< phonons per intracavity photon
    double kappa = 0.0;        ///< linewidth of the mode used in the estimate, rad/s
};

struct ProbeOccupancy {
    double n_in = 0.0;
    double n_p = 0.0;
};

/// n_p = eta_p Gamma / kappa_p, n_in = eta_p Gamma kappa_p / (4 kappa_p,ex).
ProbeOccupancy probe_occupancy(double eta_p, double gamma, double kappa_p, double kappa_p_ex);

/// (1 - kappa_f0 / kappa_f)^2.
double filter_efficiency(const FilterParams& filter);

/// Airy transmission eta_f / (1 + (2F/pi)^2 sin^2(pi Delta / omega_fsr)).
double filter_leakage(const FilterParams& filter, double detuning);

/// Same Lorentzian-in-sine form with the coefficient (4 / (kappa_f / omega_fsr))^2.
/// Comparison output only.
double filter_leakage_printed(const FilterParams& filter, double detuning);

/// R_d1^2 tau_c.
double coincidence_dark_rate(const DetectionParams& det);

double total_efficiency(double eta_p, double eta_om, double eta_f, double eta_chi, double eta_d);
double signal_rate(double lambda_c, double d, double eta);

struct AbsorptionNoise {
    double n_abs1 = 0.0;
    double p_abs = 0.0;
    double R_abs = 0.0;
};

/// n_abs1 = n_abs_base Gamma / kappa, p_abs = eta_p n_abs1 eta_om,
/// R_abs = eta_p Gamma p_abs * chain where chain = eta_f eta_chi eta_d.
AbsorptionNoise absorption_noise(const AbsorptionParams& params, double gamma, double eta_p,
                                 double eta_om, double chain);

/// n_abs_base * n_cav^{1/3}.
double absorption_cube_root(double n_abs_base, double n_cav);

struct BudgetInputs {
    SystemParams system;
    double temperature = 0.01;
    double eta_p = 0.01;
    FilterParams filter;
    DetectionParams detection;
    AbsorptionParams absorption;
    double multiplex_n = 1.0;

    std::optional<double> eta_om;
    std::optional<double> p_om;
    /// Leakage probability; computed from the filter at Omega when absent.
    std::optional<double> p_f;
    std::optional<double> D;
    /// Label stored with the upstream values ("live", "paper_values", ...).
    std::string upstream_source = "live";
};

struct BudgetRow {
    std::string channel;
    double rate = 0.0;        ///< coincidences/s
    double lambda_min = 0.0;  ///< 1/s
};

struct BudgetInput {
    std::string name;
    double value = 0.0;
    std::string source;
};

struct NoiseBudget {
    std::vector<BudgetRow> rows;
    double total_rate = 0.0;
    double total_lambda_min = 0.0;
    double eta = 0.0;
    double D = 0.0;
    std::vector<BudgetInput> inputs;
};

NoiseBudget build_table(const BudgetInputs& in);

/// 1 / (lambda_c D eta N).
double measurement_time(double lambda_c, double d, double eta, double n = 1.0);

struct ExclusionPoint {
    double r_c = 0.0;
    double D = 0.0;
    double lambda_min = 0.0;
};

/// lambda_min(r_c) = total_noise_rate / (D(r_c) eta) for a cuboid resonator.
std::vector<ExclusionPoint> exclusion_curve(const std::vector<double>& r_c_grid,
                                            const Cuboid& geometry, double x0,
                                            double total_noise_rate, double eta,
                                            Execution exec = Execution::OpenMP, int jobs = 0);

struct QuadraticParams {
    double g0_2 = 0.0;
    double n_cav = 0.0;
    double kappa = 0.0;
    double gamma = 0.0;
    double g_linear = 0.0;

    void validate() const;
};

/// 1/2 erfc(delta / (sigma sqrt 2)): probability of a Gaussian fluctuation above delta.
double gaussian_tail(double delta, double sigma);

struct QuadraticReport {
    double N = 0.0;                 ///< n_cav kappa / Gamma
    double sigma = 0.0;             ///< kappa / sqrt(N)
    double shift = 0.0;             ///< 2 sqrt(n_cav) g0_2
    double tail_probability = 0.0;
    double spurious_rate = 0.0;     ///< Gamma * tail
    double threshold_printed = 0.0; ///< 3.5 sqrt(kappa Gamma) n_cav^{-3/2}
    double threshold_derived = 0.0; ///< 3.5 sqrt(kappa Gamma) / (2 n_cav)
    double backaction_flux = 0.0;   ///< 4 g_linear^2 / kappa
    double g_max = 0.0;             ///< sqrt(lambda_c D kappa / 4)
    double n_abs_law = 0.0;         ///< cube-root law at n_cav
    double n_abs_quoted = 5.0;
};

QuadraticReport quadratic_feasibility(const QuadraticParams& q, double lambda_c, double d,
                                      double n_abs_base = 10.0);

}  // namespace cslprobe
