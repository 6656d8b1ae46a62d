#pragma once

// Born-Markov master equation for the three-mode optomechanical system.
//
// All rates are angular (rad/s) and the Hamiltonian is expressed as H/hbar,
// so the generator reads
//
//   d rho/dt = -i[H, rho] + sum_k rate_k (A_k rho A_k^+ - 1/2 {A_k^+ A_k, rho}).

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "cslprobe/fock.hpp"

namespace cslprobe {

struct SystemParams {
    double omega = 0.0;       ///< mechanical angular frequency
    double gamma = 0.0;       ///< mechanical energy decay
    double g0 = 0.0;          ///< single-photon coupling
    double kappa_p0 = 0.0;    ///< probe intrinsic decay
    double kappa_p_ex = 0.0;  ///< probe external coupling
    double kappa_s0 = 0.0;    ///< signal intrinsic decay
    double kappa_s_ex = 0.0;  ///< signal external coupling
    double n_th = 0.0;        ///< mean thermal phonon occupancy
    double n_dot_c = 0.0;     ///< collapse phonon flux (1/s)
    bool rwa = true;

    double kappa_p() const noexcept { return kappa_p0 + kappa_p_ex; }
    double kappa_s() const noexcept { return kappa_s0 + kappa_s_ex; }

    /// Throws InvalidArgument on negative/non-finite rates or rwa == false with omega == 0.
    void validate() const;
};

struct Dissipator {
    Operator op;
    double rate = 0.0;
};

/// H(t) = H_0 + R e^{-i w t} + R^+ e^{+i w t}.
class Hamiltonian {
public:
    explicit Hamiltonian(Operator static_part);
    Hamiltonian(Operator static_part, Operator rotating, double frequency);

    const FockSpace& space() const noexcept { return static_part_.space(); }
    bool time_dependent() const noexcept { return rotating_.has_value(); }
    double frequency() const noexcept { return frequency_; }
    const Operator& static_part() const noexcept { return static_part_; }
    /// R; only valid when time_dependent().
    const Operator& rotating() const { return rotating_.value(); }

    Operator at(double t) const;
    /// Writes H(t) into `out` without allocating when `out` is already sized.
    void evaluate(double t, Matrix& out) const;

private:
    Operator static_part_;
    std::optional<Operator> rotating_;
    double frequency_ = 0.0;
};

/// g0 (b^+ e^{-iWt} + b e^{iWt})(a_p^+ a_s e^{iWt} + a_p a_s^+ e^{-iWt}); with rwa only
/// the resonant part g0 (b^+ a_p^+ a_s + b a_p a_s^+). The coherent drive is omitted.
Hamiltonian optomechanical_hamiltonian(const SystemParams& params, const FockSpace& space);
Operator hamiltonian_at(const SystemParams& params, const FockSpace& space, double t);

/// Optical decay kappa_p D[a_p], kappa_s D[a_s]; optionally the mechanical bath
/// Gamma(1+n_th) D[b] and (Gamma n_th + n_dot_c) D[b^+]. Zero-rate entries are dropped.
std::vector<Dissipator> standard_dissipators(const SystemParams& params, const FockSpace& space,
                                             bool include_mechanical);

Matrix lindblad_rhs(const DensityMatrix& rho, const Operator& hamiltonian,
                    std::span<const Dissipator> dissipators);

class TimeSeries {
public:
    explicit TimeSeries(std::vector<std::string> channel_names);

    void append(double t, std::span<const double> values);

    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::vector<double>& channel(const std::string& name) const;
    const std::vector<double>& channel(std::size_t i) const { return channels_.at(i); }
    std::size_t size() const noexcept { return times_.size(); }

private:
    std::vector<std::string> names_;
    std::vector<double> times_;
    std::vector<std::vector<double>> channels_;
};

struct Observable {
    std::string name;
    Operator op;
};

/// Records rate * integral_0^t <op> dt'.
struct CumulativeObservable {
    std::string name;
    double rate = 0.0;
    Operator op;
};

struct IntegratorOptions {
    double dt = 0.0;                 ///< requested step; shrunk so steps tile t_final exactly
    std::size_t sample_every = 1;    ///< record every n-th step (the final step is always recorded)
    double trace_drift_limit = 1e-6;
};

/// Fixed-step RK4 propagation of rho together with the cumulative integrals,
/// which are advanced as extra ODE components in the same stages.
class MasterEquationIntegrator {
public:
    MasterEquationIntegrator(DensityMatrix rho0, Hamiltonian hamiltonian,
                             std::vector<Dissipator> dissipators,
                             std::vector<Observable> observables,
                             std::vector<CumulativeObservable> cumulative,
                             IntegratorOptions options);

    /// Advance to absolute time `t_end`, appending samples to the series.
    void advance_to(double t_end);

    double time() const noexcept { return t_; }
    const DensityMatrix& state() const noexcept { return rho_; }
    const TimeSeries& series() const noexcept { return series_; }
    double cumulative(std::size_t i) const { return cumulative_.at(i); }
    double max_trace_drift() const noexcept { return max_drift_; }
    std::size_t steps_taken() const noexcept { return steps_; }

private:
    void rhs(double t, const Matrix& rho, Matrix& out, std::span<double> dcum);
    void record();

    DensityMatrix rho_;
    Hamiltonian hamiltonian_;
    std::vector<Dissipator> dissipators_;
    std::vector<Observable> observables_;
    std::vector<CumulativeObservable> cumulative_ops_;
    IntegratorOptions options_;

    using Sparse = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
    Sparse h0_eff_;              // H_0 - i/2 sum_k rate_k A_k^+ A_k
    Sparse rot_, rot_adj_;       // R, R^+
    std::vector<Sparse> jumps_;  // sqrt(rate_k) A_k
    std::vector<Sparse> cumulative_sparse_;
    Matrix scratch_, scratch2_;
    std::vector<double> cumulative_;
    TimeSeries series_;
    double t_ = 0.0;
    double trace0_ = 0.0;
    double max_drift_ = 0.0;
    std::size_t steps_ = 0;
};

struct IntegrationResult {
    TimeSeries series;
    DensityMatrix final_state;
    std::vector<double> cumulative_final;
    double max_trace_drift = 0.0;
};

IntegrationResult integrate(const DensityMatrix& rho0, const Hamiltonian& hamiltonian,
                            std::span<const Dissipator> dissipators, double t_final,
                            std::span<const Observable> observables,
                            std::span<const CumulativeObservable> cumulative,
                            const IntegratorOptions& options);

IntegrationResult integrate(const DensityMatrix& rho0, const SystemParams& params,
                            std::span<const Dissipator> dissipators, double t_final,
                            std::span<const Observable> observables,
                            std::span<const CumulativeObservable> cumulative,
                            const IntegratorOptions& options);

/// 0.02 / max(g0, kappa_p, kappa_s) under rwa, (2 pi / Omega) / 50 otherwise.
double default_step(const SystemParams& params);

}  // namespace cslprobe
