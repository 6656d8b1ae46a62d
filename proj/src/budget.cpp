#include "cslprobe/budget.hpp"

#include <cmath>
#include <numbers>

#include "cslprobe/errors.hpp"

namespace cslprobe {

namespace {

void require_fraction(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidArgument(std::string(name) + " must lie in [0, 1]");
    }
}

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string(name) + " must be finite and nonnegative");
    }
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string(name) + " must be finite and positive");
    }
}

}  // namespace

double FilterParams::omega_fsr() const {
    require_positive(cavity_length, "filter.cavity_length");
    return 2.0 * std::numbers::pi * constants::c_light / (2.0 * cavity_length);
}

void FilterParams::validate() const {
    require_nonnegative(kappa_f0, "filter.kappa_f0");
    require_nonnegative(kappa_f_in, "filter.kappa_f_in");
    require_nonnegative(kappa_f_out, "filter.kappa_f_out");
    require_positive(kappa_f(), "filter.kappa_f");
    if (!(omega_fsr() > kappa_f())) {
        throw InvalidArgument("filter: free spectral range must exceed the loaded linewidth");
    }
}

void DetectionParams::validate() const {
    require_fraction(eta_chi, "detection.eta_chi");
    require_fraction(eta_d1, "detection.eta_d1");
    require_nonnegative(R_d1, "detection.R_d1");
    require_nonnegative(tau_c, "detection.tau_c");
}

ProbeOccupancy probe_occupancy(double eta_p, double gamma, double kappa_p, double kappa_p_ex) {
    require_nonnegative(eta_p, "eta_p");
    if (eta_p > 0.1) {
        throw InvalidArgument("eta_p > 0.1 breaks the weak-probe assumption n_p << Gamma/kappa_p");
    }
    require_nonnegative(gamma, "Gamma");
    require_positive(kappa_p, "kappa_p");
    require_positive(kappa_p_ex, "kappa_p_ex");
    return {eta_p * gamma * kappa_p / (4.0 * kappa_p_ex), eta_p * gamma / kappa_p};
}

double filter_efficiency(const FilterParams& filter) {
    filter.validate();
    const double r = 1.0 - filter.kappa_f0 / filter.kappa_f();
    return r * r;
}

namespace {

double airy(const FilterParams& filter, double detuning, double coefficient) {
    const double s = std::sin(std::numbers::pi * detuning / filter.omega_fsr());
    return filter_efficiency(filter) / (1.0 + coefficient * s * s);
}

}  // namespace

double filter_leakage(const FilterParams& filter, double detuning) {
    filter.validate();
    const double c = 2.0 * filter.finesse() / std::numbers::pi;
    return airy(filter, detuning, c * c);
}

double filter_leakage_printed(const FilterParams& filter, double detuning) {
    filter.validate();
    const double c = 4.0 / (filter.kappa_f() / filter.omega_fsr());
    return airy(filter, detuning, c * c);
}

double coincidence_dark_rate(const DetectionParams& det) {
    det.validate();
    return det.R_d1 * det.R_d1 * det.tau_c;
}

double total_efficiency(double eta_p, double eta_om, double eta_f, double eta_chi, double eta_d) {
    require_fraction(eta_p, "eta_p");
    require_fraction(eta_om, "eta_om");
    require_fraction(eta_f, "eta_f");
    require_fraction(eta_chi, "eta_chi");
    require_fraction(eta_d, "eta_d");
    return eta_p * eta_om * eta_f * eta_chi * eta_d;
}

double signal_rate(double lambda_c, double d, double eta) {
    require_nonnegative(lambda_c, "lambda_c");
    require_nonnegative(d, "D");
    require_fraction(eta, "eta");
    return lambda_c * d * eta;
}

AbsorptionNoise absorption_noise(const AbsorptionParams& params, double gamma, double eta_p,
                                 double eta_om, double chain) {
    require_nonnegative(params.n_abs_base, "absorption.n_abs_base");
    require_positive(params.kappa, "absorption.kappa");
    require_positive(gamma, "Gamma");
    require_fraction(eta_p, "eta_p");
    require_fraction(eta_om, "eta_om");
    require_fraction(chain, "chain efficiency");
    AbsorptionNoise out;
    out.n_abs1 = params.n_abs_base * gamma / params.kappa;
    out.p_abs = eta_p * out.n_abs1 * eta_om;
    out.R_abs = eta_p * gamma * out.p_abs * chain;
    return out;
}

double absorption_cube_root(double n_abs_base, double n_cav) {
    require_nonnegative(n_abs_base, "n_abs_base");
    require_nonnegative(n_cav, "n_cav");
    return n_abs_base * std::cbrt(n_cav);
}

NoiseBudget build_table(const BudgetInputs& in) {
    in.system.validate();
    in.filter.validate();
    in.detection.validate();
    if (!in.eta_om) throw InvalidArgument("build_table: missing upstream value eta_om");
    if (!in.p_om) throw InvalidArgument("build_table: missing upstream value p_om");
    if (!in.D) throw InvalidArgument("build_table: missing upstream value D");
    require_positive(*in.D, "D");
    require_nonnegative(*in.p_om, "p_om");
    if (!(in.multiplex_n >= 1.0)) throw InvalidArgument("multiplex_n must be >= 1");

    const auto& s = in.system;
    const double eta_f = filter_efficiency(in.filter);
    const double eta_chi = in.detection.eta_chi;
    const double eta_d = in.detection.eta_d();
    const double eta = total_efficiency(in.eta_p, *in.eta_om, eta_f, eta_chi, eta_d);
    const double p_f = in.p_f ? *in.p_f : filter_leakage(in.filter, s.omega);
    const double photon_rate = in.eta_p * s.gamma;  // probe photons entering the probe mode
    const double d_eta = *in.D * eta;

    NoiseBudget out;
    out.eta = eta;
    out.D = *in.D;

    const double n_dot_th = thermal_flux(s.gamma, s.omega, in.temperature);
    const auto abs = absorption_noise(in.absorption, s.gamma, in.eta_p, *in.eta_om,
                                      eta_f * eta_chi * eta_d);
    const double rates[] = {
        eta * n_dot_th,
        photon_rate * *in.p_om * eta_f * eta_chi * eta_d,
        abs.R_abs,
        photon_rate * p_f * eta_chi * eta_d,
        coincidence_dark_rate(in.detection) / in.multiplex_n,
    };
    const char* names[] = {"thermal", "optomechanical", "absorption", "probe_photons",
                           "dark_counts"};
    for (std::size_t i = 0; i < 5; ++i) {
        const double lm = d_eta > 0.0 ? rates[i] / d_eta : INFINITY;
        out.rows.push_back({names[i], rates[i], lm});
        out.total_rate += rates[i];
        out.total_lambda_min += lm;
    }

    const std::string up = in.upstream_source;
    const std::string pf_source = in.p_f ? up : std::string("filter_leakage");
    out.inputs = {
        {"eta_p", in.eta_p, "config"},
        {"eta_om", *in.eta_om, up},
        {"eta_f", eta_f, "filter_efficiency"},
        {"eta_chi", eta_chi, "config"},
        {"eta_d", eta_d, "detection"},
        {"eta", eta, "total_efficiency"},
        {"D", *in.D, up},
        {"p_om", *in.p_om, up},
        {"p_f", p_f, pf_source},
        {"n_dot_th", n_dot_th, "thermal_flux"},
        {"n_abs1", abs.n_abs1, "absorption_noise"},
        {"p_abs", abs.p_abs, "absorption_noise"},
        {"multiplex_n", in.multiplex_n, "config"},
    };
    return out;
}

double measurement_time(double lambda_c, double d, double eta, double n) {
    require_positive(lambda_c, "lambda_c");
    require_positive(d, "D");
    require_positive(eta, "eta");
    require_positive(n, "N");
    return 1.0 / (lambda_c * d * eta * n);
}

std::vector<ExclusionPoint> exclusion_curve(const std::vector<double>& r_c_grid,
                                            const Cuboid& geometry, double x0,
                                            double total_noise_rate, double eta, Execution exec,
                                            int jobs) {
    for (double r : r_c_grid) require_positive(r, "r_c");
    require_nonnegative(total_noise_rate, "total noise rate");
    require_positive(eta, "eta");
    return parallel_map(
        r_c_grid.size(),
        [&](std::size_t i) {
            ExclusionPoint p;
            p.r_c = r_c_grid[i];
            p.D = d_cuboid(geometry.L1, geometry.L2, geometry.L3, geometry.density, p.r_c, x0);
            p.lambda_min = total_noise_rate / (p.D * eta);
            return p;
        },
        exec, jobs);
}

void QuadraticParams::validate() const {
    require_nonnegative(g0_2, "quadratic.g0_2");
    require_positive(n_cav, "quadratic.n_cav");
    require_positive(kappa, "quadratic.kappa");
    require_positive(gamma, "quadratic.gamma");
    require_nonnegative(g_linear, "quadratic.g_linear");
}

double gaussian_tail(double delta, double sigma) {
    require_positive(sigma, "sigma");
    return 0.5 * std::erfc(delta / (sigma * std::numbers::sqrt2));
}

QuadraticReport quadratic_feasibility(const QuadraticParams& q, double lambda_c, double d,
                                      double n_abs_base) {
    q.validate();
    require_nonnegative(lambda_c, "lambda_c");
    require_nonnegative(d, "D");
    QuadraticReport r;
    r.N = q.n_cav * q.kappa / q.gamma;
    r.sigma = q.kappa / std::sqrt(r.N);
    r.shift = 2.0 * std::sqrt(q.n_cav) * q.g0_2;
    r.tail_probability = gaussian_tail(r.shift, r.sigma);
    r.spurious_rate = q.gamma * r.tail_probability;
    const double base = 3.5 * std::sqrt(q.kappa * q.gamma);
    r.threshold_printed = base * std::pow(q.n_cav, -1.5);
    r.threshold_derived = base / (2.0 * q.n_cav);
    r.backaction_flux = 4.0 * q.g_linear * q.g_linear / q.kappa;
    r.g_max = std::sqrt(lambda_c * d * q.kappa / 4.0);
    r.n_abs_law = absorption_cube_root(n_abs_base, q.n_cav);
    return r;
}

}  // namespace cslprobe
