#include "cslprobe/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cslprobe/errors.hpp"
#include "cslprobe/quadrature.hpp"

namespace cslprobe {

namespace {

enum class Readout { SignalEmission, PhononOccupancy };

struct RunOutput {
    double value = 0.0;
    double residual = 0.0;
    double t_final = 0.0;
    double dt = 0.0;
    TimeSeries series{{}};
};

double relative_change(double reference, double value) {
    return std::abs(value - reference) / std::max(std::abs(reference), 1e-12);
}

double slowest_optical(const SystemParams& p) {
    const double k = std::min(p.kappa_p(), p.kappa_s());
    if (!(k > 0.0)) throw InvalidArgument("scenario: optical decay rates must be positive");
    return k;
}

RunOutput run_once(const SystemParams& params, std::array<int, 3> init,
                   std::array<int, 3> cutoffs, double dt, Readout readout, double residual_tol,
                   std::size_t samples) {
    const FockSpace space(std::vector<int>(cutoffs.begin(), cutoffs.end()));
    const auto rho0 = basis_state(space, std::span<const int>(init));
    const auto np = number(space, Mode::Probe);
    const auto ns = number(space, Mode::Signal);
    const auto nb = number(space, Mode::Phonon);

    std::vector<Observable> obs{{"n_b", nb}, {"n_p", np}, {"n_s", ns}};
    std::vector<CumulativeObservable> cum{{"emitted_signal", params.kappa_s_ex, ns}};

    const double k_min = slowest_optical(params);
    const double horizon = 12.0 / k_min;
    IntegratorOptions opts;
    opts.dt = dt;
    const auto n_steps = static_cast<std::size_t>(std::ceil(horizon / dt));
    opts.sample_every = samples == 0 ? 1 : std::max<std::size_t>(1, n_steps / samples);

    MasterEquationIntegrator integrator(rho0, optomechanical_hamiltonian(params, space),
                                        standard_dissipators(params, space, false), obs, cum,
                                        opts);
    integrator.advance_to(horizon);
    auto residual = [&] {
        return (expectation(integrator.state(), np) + expectation(integrator.state(), ns)).real();
    };
    int extensions = 0;
    while (residual() > residual_tol) {
        if (++extensions > 50) {
            throw ConvergenceError("scenario: intracavity excitation did not decay below " +
                                   std::to_string(residual_tol));
        }
        integrator.advance_to(integrator.time() + 4.0 / k_min);
    }

    RunOutput out;
    out.value = readout == Readout::SignalEmission
                    ? integrator.cumulative(0)
                    : expectation(integrator.state(), nb).real();
    out.residual = residual();
    out.t_final = integrator.time();
    out.dt = dt;
    out.series = integrator.series();
    return out;
}

ScenarioResult run_scenario(const char* name, const SystemParams& params,
                            std::array<int, 3> init, Readout readout,
                            const ScenarioOptions& options) {
    params.validate();
    for (std::size_t i = 0; i < 3; ++i) {
        if (options.cutoffs[i] < init[i]) {
            throw InvalidArgument(std::string(name) + ": cutoffs cannot hold the initial state");
        }
    }
    const double dt = options.dt > 0.0 ? options.dt : default_step(params);
    auto base = run_once(params, init, options.cutoffs, dt, readout, options.residual_tol,
                         options.samples);

    ScenarioResult result;
    result.name = name;
    result.inputs = params;
    result.value = base.value;
    result.convergence.cutoffs = options.cutoffs;
    result.convergence.dt = dt;
    result.convergence.t_final = base.t_final;
    result.convergence.residual_excitation = base.residual;

    if (options.check_cutoff) {
        auto larger = options.cutoffs;
        for (auto& c : larger) ++c;
        const auto big = run_once(params, init, larger, dt, readout, options.residual_tol, 1);
        result.convergence.cutoff_delta = relative_change(base.value, big.value);
        result.convergence.cutoff_checked = true;
        if (result.convergence.cutoff_delta > options.cutoff_tol) {
            throw ConvergenceError(std::string(name) + ": cutoff convergence failed (delta " +
                                   std::to_string(result.convergence.cutoff_delta) + ")");
        }
    }
    if (options.check_step) {
        const auto fine = run_once(params, init, options.cutoffs, 0.5 * dt, readout,
                                   options.residual_tol, 1);
        result.convergence.step_delta = relative_change(base.value, fine.value);
        result.convergence.step_checked = true;
        if (result.convergence.step_delta > options.step_tol) {
            throw ConvergenceError(std::string(name) + ": step-halving convergence failed (delta " +
                                   std::to_string(result.convergence.step_delta) + ")");
        }
    }
    result.series = std::move(base.series);
    return result;
}

}  // namespace

ScenarioResult eta_om(const SystemParams& params, const ScenarioOptions& options) {
    return run_scenario("eta_om", params, {1, 1, 0}, Readout::SignalEmission, options);
}

ScenarioResult eta_stokes(const SystemParams& params, const ScenarioOptions& options) {
    return run_scenario("eta_stokes", params, {0, 0, 1}, Readout::PhononOccupancy, options);
}

ScenarioOptions eta_om2_defaults() {
    ScenarioOptions o;
    o.cutoffs = {3, 2, 2};
    return o;
}

ScenarioResult eta_om2(const SystemParams& params, ScenarioOptions options) {
    if (options.cutoffs[0] < 3) {
        throw InvalidArgument("eta_om2: phonon cutoff must be at least 3");
    }
    return run_scenario("eta_om2", params, {2, 1, 0}, Readout::SignalEmission, options);
}

DirectOccupation direct_occupation_noise(const SystemParams& params, double eta_stokes_value) {
    params.validate();
    if (!(params.kappa_p_ex > 0.0)) {
        throw InvalidArgument("direct_occupation_noise: kappa_p_ex must be positive");
    }
    const double ks2 = params.kappa_s() * params.kappa_s();
    DirectOccupation out;
    out.theta = ks2 / (ks2 + params.omega * params.omega);
    out.p_direct = params.kappa_p() / params.kappa_p_ex * out.theta * eta_stokes_value;
    return out;
}

DirectOccupation direct_occupation_noise(const SystemParams& params) {
    auto p = params;
    p.rwa = true;
    return direct_occupation_noise(params, eta_stokes(p).value);
}

// ---------------------------------------------------------------------------

CounterRotating counterrot_populations(const SystemParams& params,
                                       const CounterRotatingOptions& options) {
    SystemParams p = params;
    p.rwa = false;
    p.validate();
    for (int c : options.cutoffs) {
        if (c < 2) throw InvalidArgument("counterrot_populations: cutoffs must be >= (2, 2, 2)");
    }
    const double k_min = slowest_optical(p);
    const double t0 = options.t0_factor / k_min;
    if (t0 * k_min < 5.0) {
        throw InvalidArgument("counterrot_populations: t0 must be >> 1/kappa (t0 kappa >= 5)");
    }
    if (p.gamma > 0.0 && t0 * p.gamma > 1e-2) {
        throw InvalidArgument("counterrot_populations: t0 must be << 1/Gamma");
    }
    const double window = 2.0 * std::numbers::pi / p.omega;
    const double dt = options.dt > 0.0 ? options.dt : default_step(p);

    struct Raw {
        double p1 = 0.0;
        double p2 = 0.0;
        Complex lit1, lit2;
        double residual = 0.0;
        TimeSeries series{{}};
    };
    auto run = [&](std::array<int, 3> cutoffs, double step, std::size_t samples) {
        const FockSpace space(std::vector<int>(cutoffs.begin(), cutoffs.end()));
        const auto rho0 = basis_state(space, {0, 1, 0});
        const auto p1 = occupation_projector(space, 0, 1);
        const auto p2 = occupation_projector(space, 0, 2);
        std::vector<Observable> obs{{"p_nb1", p1},
                                    {"p_nb2", p2},
                                    {"n_p", number(space, Mode::Probe)},
                                    {"n_s", number(space, Mode::Signal)}};
        std::vector<CumulativeObservable> cum{{"int_p_nb1", 1.0, p1}, {"int_p_nb2", 1.0, p2}};
        IntegratorOptions opts;
        opts.dt = step;
        const auto n_steps = static_cast<std::size_t>(std::ceil((t0 + window) / step));
        opts.sample_every = samples == 0 ? 1 : std::max<std::size_t>(1, n_steps / samples);
        MasterEquationIntegrator integrator(rho0, optomechanical_hamiltonian(p, space),
                                            standard_dissipators(p, space, false), obs, cum, opts);
        integrator.advance_to(t0);
        const auto& rho = integrator.state();
        Raw raw;
        raw.lit1 = matrix_element(rho, {0, 0, 1}, {1, 0, 0}) +
                   matrix_element(rho, {1, 0, 1}, {1, 0, 1});
        raw.lit2 = matrix_element(rho, {0, 0, 2}, {2, 0, 0}) +
                   matrix_element(rho, {0, 1, 2}, {2, 1, 0});
        raw.residual = (expectation(rho, number(space, Mode::Probe)) +
                        expectation(rho, number(space, Mode::Signal)))
                           .real();
        const double c1 = integrator.cumulative(0);
        const double c2 = integrator.cumulative(1);
        integrator.advance_to(t0 + window);
        raw.p1 = (integrator.cumulative(0) - c1) / window;
        raw.p2 = (integrator.cumulative(1) - c2) / window;
        raw.series = integrator.series();
        return raw;
    };

    auto base = run(options.cutoffs, dt, options.samples);
    CounterRotating out;
    out.p_cr1 = base.p1;
    out.p_cr2 = base.p2;
    out.literal1 = base.lit1;
    out.literal2 = base.lit2;
    out.t0 = t0;
    out.convergence.cutoffs = options.cutoffs;
    out.convergence.dt = dt;
    out.convergence.t_final = t0 + window;
    out.convergence.residual_excitation = base.residual;

    auto delta = [&](const Raw& other) {
        return std::max(relative_change(base.p1, other.p1), relative_change(base.p2, other.p2));
    };
    if (options.check_cutoff) {
        auto larger = options.cutoffs;
        for (auto& c : larger) ++c;
        out.convergence.cutoff_delta = delta(run(larger, dt, 1));
        out.convergence.cutoff_checked = true;
        if (out.convergence.cutoff_delta > options.cutoff_tol) {
            throw ConvergenceError("counterrot: cutoff convergence failed (delta " +
                                   std::to_string(out.convergence.cutoff_delta) + ")");
        }
    }
    if (options.check_step) {
        out.convergence.step_delta = delta(run(options.cutoffs, 0.5 * dt, 1));
        out.convergence.step_checked = true;
        if (out.convergence.step_delta > options.step_tol) {
            throw ConvergenceError("counterrot: step-halving convergence failed (delta " +
                                   std::to_string(out.convergence.step_delta) + ")");
        }
    }
    out.series = std::move(base.series);
    return out;
}

PhononPopulations phonon_decay_populations(double p1_0, double p2_0, double gamma, double t) {
    if (t < 0.0) throw InvalidArgument("phonon_decay_populations: negative time");
    if (p1_0 < 0.0 || p1_0 > 1.0 || p2_0 < 0.0 || p2_0 > 1.0) {
        throw InvalidArgument("phonon_decay_populations: initial populations must lie in [0, 1]");
    }
    if (gamma < 0.0) throw InvalidArgument("phonon_decay_populations: negative decay rate");
    const double e1 = std::exp(-gamma * t);
    const double e2 = e1 * e1;
    return {p1_0 * e1 + 2.0 * p2_0 * (e1 - e2), p2_0 * e2};
}

SpuriousPhotonCurve p_om_cumulative(double gamma, double eta_p, double p1_0, double p2_0,
                                    double eta_om_value, double eta_om2_value,
                                    std::size_t samples, double horizon_decays) {
    if (!(gamma > 0.0)) throw InvalidArgument("p_om_cumulative: Gamma must be positive");
    if (samples < 2) throw InvalidArgument("p_om_cumulative: need at least 2 samples");
    auto integrand = [&](double t) {
        const auto pop = phonon_decay_populations(p1_0, p2_0, gamma, t);
        return eta_p * gamma * (pop.p1 * eta_om_value + pop.p2 * eta_om2_value);
    };
    QuadratureOptions q;
    q.rel_tol = 1e-13;
    q.abs_tol = 1e-300;

    SpuriousPhotonCurve out;
    out.curve = TimeSeries({"p_om", "p_nb1", "p_nb2"});
    const double t_end = horizon_decays / gamma;
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = t_end * static_cast<double>(i) / static_cast<double>(samples - 1);
        if (i > 0) acc += integrate_adaptive(integrand, prev, t, q).value;
        const auto pop = phonon_decay_populations(p1_0, p2_0, gamma, t);
        const double row[] = {acc, pop.p1, pop.p2};
        out.curve.append(t, row);
        prev = t;
    }
    q.initial_panels = 60;
    out.asymptote_quadrature = integrate_adaptive(integrand, 0.0, 60.0 / gamma, q).value;
    out.asymptote_closed_form =
        eta_p * ((p1_0 + p2_0) * eta_om_value + 0.5 * p2_0 * eta_om2_value);
    return out;
}

NoisePipeline run_noise_pipeline(const SystemParams& params, double eta_p,
                                 const CounterRotatingOptions& cr_options,
                                 const ScenarioOptions& options,
                                 const ScenarioOptions& om2_options) {
    SystemParams rwa = params;
    rwa.rwa = true;
    NoisePipeline out;
    out.eta_om = eta_om(rwa, options).value;
    out.eta_stokes = eta_stokes(rwa, options).value;
    out.eta_om2 = eta_om2(rwa, om2_options).value;
    out.direct = direct_occupation_noise(params, out.eta_stokes);
    out.counterrot = counterrot_populations(params, cr_options);
    out.p1_0 = out.direct.p_direct + out.counterrot.p_cr1;
    out.p2_0 = out.counterrot.p_cr2;
    out.p_om = p_om_cumulative(params.gamma, eta_p, out.p1_0, out.p2_0, out.eta_om, out.eta_om2);
    return out;
}

}  // namespace cslprobe
