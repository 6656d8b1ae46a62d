#pragma once

// Master-equation scenarios behind the noise budget: conversion efficiencies,
// spurious Stokes scattering, counter-rotating noise phonons, and the
// cumulative spurious-photon probability p_om.
//
// Mechanical damping is switched off inside every run (Gamma << kappa) and
// applied analytically afterwards through phonon_decay_populations.

#include <array>
#include <complex>
#include <string>

#include "cslprobe/lindblad.hpp"

namespace cslprobe {

struct ConvergenceReport {
    std::array<int, 3> cutoffs{};
    double dt = 0.0;
    double t_final = 0.0;
    double residual_excitation = 0.0;  ///< <n_p> + <n_s> at t_final
    double cutoff_delta = 0.0;         ///< relative change with every cutoff + 1
    double step_delta = 0.0;           ///< relative change with dt / 2
    bool cutoff_checked = false;
    bool step_checked = false;
};

struct ScenarioResult {
    std::string name;
    SystemParams inputs;
    double value = 0.0;
    ConvergenceReport convergence;
    TimeSeries series{{}};
};

struct ScenarioOptions {
    std::array<int, 3> cutoffs{2, 2, 2};
    bool check_cutoff = true;
    bool check_step = false;
    double cutoff_tol = 1e-3;
    double step_tol = 1e-6;
    double residual_tol = 1e-6;
    /// 0 selects default_step(params).
    double dt = 0.0;
    /// Samples kept in the returned series (0 keeps every step).
    std::size_t samples = 400;
};

/// kappa_s,ex * int_0^inf <a_s^+ a_s> dt from |110>.
ScenarioResult eta_om(const SystemParams& params, const ScenarioOptions& options = {});
/// <b^+ b> after optical decay from |001>.
ScenarioResult eta_stokes(const SystemParams& params, const ScenarioOptions& options = {});
/// Signal emission from |210>; cutoffs default to (3, 2, 2).
ScenarioResult eta_om2(const SystemParams& params, ScenarioOptions options = {});
ScenarioOptions eta_om2_defaults();

struct DirectOccupation {
    double theta = 0.0;     ///< kappa_s^2 / (kappa_s^2 + Omega^2)
    double p_direct = 0.0;  ///< (kappa_p / kappa_p,ex) theta eta_Stokes
};
DirectOccupation direct_occupation_noise(const SystemParams& params, double eta_stokes_value);
DirectOccupation direct_occupation_noise(const SystemParams& params);

struct CounterRotating {
    double p_cr1 = 0.0;  ///< Tr[P_{n_b=1} rho(t0)], averaged over one 2 pi/Omega window
    double p_cr2 = 0.0;  ///< Tr[P_{n_b=2} rho(t0)], same window
    /// <001|rho|100> + <101|rho|101> and <002|rho|200> + <012|rho|210> at t0.
    std::complex<double> literal1;
    std::complex<double> literal2;
    double t0 = 0.0;
    ConvergenceReport convergence;
    TimeSeries series{{}};
};

struct CounterRotatingOptions {
    std::array<int, 3> cutoffs{2, 2, 2};
    /// t0 = t0_factor / min(kappa_p, kappa_s).
    double t0_factor = 10.0;
    bool check_cutoff = false;
    bool check_step = false;
    double cutoff_tol = 1e-3;
    double step_tol = 1e-3;
    double dt = 0.0;
    std::size_t samples = 2000;
};

/// Full time-dependent run from |010> (params.rwa is ignored and forced false).
CounterRotating counterrot_populations(const SystemParams& params,
                                       const CounterRotatingOptions& options = {});

struct PhononPopulations {
    double p1 = 0.0;
    double p2 = 0.0;
};

/// p1(t) = p1_0 e^{-Gt} + 2 p2_0 (e^{-Gt} - e^{-2Gt}), p2(t) = p2_0 e^{-2Gt}.
PhononPopulations phonon_decay_populations(double p1_0, double p2_0, double gamma, double t);

struct SpuriousPhotonCurve {
    TimeSeries curve{{}};
    double asymptote_quadrature = 0.0;
    double asymptote_closed_form = 0.0;
};

/// p_om(t) = eta_p Gamma int_0^t [p1(t') eta_om + p2(t') eta_om2] dt'.
/// The curve is sampled on [0, horizon_decays / Gamma].
SpuriousPhotonCurve p_om_cumulative(double gamma, double eta_p, double p1_0, double p2_0,
                                    double eta_om_value, double eta_om2_value,
                                    std::size_t samples = 200, double horizon_decays = 10.0);

/// All master-equation-derived quantities the budget consumes.
struct NoisePipeline {
    double eta_om = 0.0;
    double eta_stokes = 0.0;
    double eta_om2 = 0.0;
    DirectOccupation direct;
    CounterRotating counterrot;
    double p1_0 = 0.0;
    double p2_0 = 0.0;
    SpuriousPhotonCurve p_om;
};

NoisePipeline run_noise_pipeline(const SystemParams& params, double eta_p,
                                 const CounterRotatingOptions& cr_options = {},
                                 const ScenarioOptions& options = {},
                                 const ScenarioOptions& om2_options = eta_om2_defaults());

}  // namespace cslprobe
