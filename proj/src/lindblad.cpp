#include "cslprobe/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cslprobe/errors.hpp"

namespace cslprobe {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_rate(double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0) {
        throw InvalidArgument(std::string("SystemParams: ") + name +
                              " must be finite and nonnegative");
    }
}

}  // namespace

void SystemParams::validate() const {
    require_rate(omega, "omega");
    require_rate(gamma, "gamma");
    require_rate(g0, "g0");
    require_rate(kappa_p0, "kappa_p0");
    require_rate(kappa_p_ex, "kappa_p_ex");
    require_rate(kappa_s0, "kappa_s0");
    require_rate(kappa_s_ex, "kappa_s_ex");
    require_rate(n_th, "n_th");
    require_rate(n_dot_c, "n_dot_c");
    if (!rwa && omega <= 0.0) {
        throw InvalidArgument("SystemParams: full Hamiltonian requires omega > 0");
    }
}

// ---------------------------------------------------------------------------

Hamiltonian::Hamiltonian(Operator static_part) : static_part_(std::move(static_part)) {}

Hamiltonian::Hamiltonian(Operator static_part, Operator rotating, double frequency)
    : static_part_(std::move(static_part)), rotating_(std::move(rotating)), frequency_(frequency) {
    if (!(static_part_.space() == rotating_->space())) {
        throw SpaceMismatch("Hamiltonian: static and rotating parts on different spaces");
    }
}

void Hamiltonian::evaluate(double t, Matrix& out) const {
    out = static_part_.matrix();
    if (rotating_) {
        const Complex phase = std::exp(-kI * frequency_ * t);
        out.noalias() += phase * rotating_->matrix();
        out.noalias() += std::conj(phase) * rotating_->matrix().adjoint();
    }
}

Operator Hamiltonian::at(double t) const {
    Matrix m;
    evaluate(t, m);
    return Operator(space(), std::move(m));
}

Hamiltonian optomechanical_hamiltonian(const SystemParams& params, const FockSpace& space) {
    params.validate();
    if (space.modes() != 3) {
        throw InvalidArgument("optomechanical_hamiltonian: space must have 3 modes");
    }
    const auto b = annihilation(space, Mode::Phonon);
    const auto ap = annihilation(space, Mode::Probe);
    const auto as = annihilation(space, Mode::Signal);
    const auto bd = b.dagger();
    const auto apd = ap.dagger();
    const auto asd = as.dagger();

    // Resonant anti-Stokes / Stokes pair.
    const auto resonant = Complex(params.g0) * (bd * apd * as + b * ap * asd);
    if (params.rwa) {
        return Hamiltonian(resonant);
    }
    // b^+ a_p a_s^+ carries e^{-2iWt}; its conjugate b a_p^+ a_s carries e^{+2iWt}.
    const auto counter = Complex(params.g0) * (bd * ap * asd);
    return Hamiltonian(resonant, counter, 2.0 * params.omega);
}

Operator hamiltonian_at(const SystemParams& params, const FockSpace& space, double t) {
    return optomechanical_hamiltonian(params, space).at(t);
}

std::vector<Dissipator> standard_dissipators(const SystemParams& params, const FockSpace& space,
                                             bool include_mechanical) {
    params.validate();
    std::vector<Dissipator> out;
    auto push = [&](Operator op, double rate) {
        if (rate > 0.0) out.push_back({std::move(op), rate});
    };
    push(annihilation(space, Mode::Probe), params.kappa_p());
    push(annihilation(space, Mode::Signal), params.kappa_s());
    if (include_mechanical) {
        const auto b = annihilation(space, Mode::Phonon);
        push(b, params.gamma * (1.0 + params.n_th));
        push(b.dagger(), params.gamma * params.n_th + params.n_dot_c);
    }
    return out;
}

Matrix lindblad_rhs(const DensityMatrix& rho, const Operator& hamiltonian,
                    std::span<const Dissipator> dissipators) {
    if (!(rho.space() == hamiltonian.space())) {
        throw SpaceMismatch("lindblad_rhs: Hamiltonian and state on different spaces");
    }
    const Matrix& r = rho.matrix();
    const Matrix& h = hamiltonian.matrix();
    Matrix out = -kI * (h * r - r * h);
    for (const auto& d : dissipators) {
        if (!(d.op.space() == rho.space())) {
            throw SpaceMismatch("lindblad_rhs: dissipator and state on different spaces");
        }
        if (!std::isfinite(d.rate) || d.rate < 0.0) {
            throw InvalidArgument("lindblad_rhs: dissipator rate must be finite and nonnegative");
        }
        const Matrix& a = d.op.matrix();
        const Matrix ad = a.adjoint();
        const Matrix ada = ad * a;
        out += d.rate * (a * r * ad - 0.5 * (ada * r + r * ada));
    }
    return out;
}

// ---------------------------------------------------------------------------

TimeSeries::TimeSeries(std::vector<std::string> channel_names)
    : names_(std::move(channel_names)), channels_(names_.size()) {}

void TimeSeries::append(double t, std::span<const double> values) {
    if (values.size() != channels_.size()) {
        throw InvalidArgument("TimeSeries: sample width does not match channel count");
    }
    if (!times_.empty() && !(t > times_.back())) {
        throw InvalidArgument("TimeSeries: times must be strictly increasing");
    }
    times_.push_back(t);
    for (std::size_t i = 0; i < values.size(); ++i) channels_[i].push_back(values[i]);
}

const std::vector<double>& TimeSeries::channel(const std::string& name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) throw InvalidArgument("TimeSeries: no channel named " + name);
    return channels_[static_cast<std::size_t>(it - names_.begin())];
}

namespace {

std::vector<std::string> channel_names(std::span<const Observable> obs,
                                       std::span<const CumulativeObservable> cum) {
    std::vector<std::string> names;
    for (const auto& o : obs) names.push_back(o.name);
    for (const auto& c : cum) names.push_back(c.name);
    return names;
}

double real_trace_product(const Matrix& rho, const Matrix& op) {
    return (rho.transpose().cwiseProduct(op)).sum().real();
}

template <class SparseT>
double sparse_trace_product(const Matrix& rho, const SparseT& op) {
    double acc = 0.0;
    for (Eigen::Index r = 0; r < op.outerSize(); ++r) {
        for (typename SparseT::InnerIterator it(op, r); it; ++it) {
            acc += (it.value() * rho(it.col(), it.row())).real();
        }
    }
    return acc;
}

}  // namespace

MasterEquationIntegrator::MasterEquationIntegrator(DensityMatrix rho0, Hamiltonian hamiltonian,
                                                   std::vector<Dissipator> dissipators,
                                                   std::vector<Observable> observables,
                                                   std::vector<CumulativeObservable> cumulative,
                                                   IntegratorOptions options)
    : rho_(std::move(rho0)),
      hamiltonian_(std::move(hamiltonian)),
      dissipators_(std::move(dissipators)),
      observables_(std::move(observables)),
      cumulative_ops_(std::move(cumulative)),
      options_(options),
      cumulative_(cumulative_ops_.size(), 0.0),
      series_(channel_names(observables_, cumulative_ops_)) {
    const auto& space = rho_.space();
    if (!(hamiltonian_.space() == space)) {
        throw SpaceMismatch("integrate: Hamiltonian and state on different spaces");
    }
    if (!(options_.dt > 0.0) || !std::isfinite(options_.dt)) {
        throw InvalidArgument("integrate: step size must be positive");
    }
    if (options_.sample_every == 0) options_.sample_every = 1;

    const auto d = static_cast<Eigen::Index>(space.dim());
    Matrix decay = Matrix::Zero(d, d);
    for (const auto& diss : dissipators_) {
        if (!(diss.op.space() == space)) {
            throw SpaceMismatch("integrate: dissipator on a different space");
        }
        if (!std::isfinite(diss.rate) || diss.rate < 0.0) {
            throw InvalidArgument("integrate: dissipator rate must be finite and nonnegative");
        }
        const Matrix& a = diss.op.matrix();
        decay.noalias() += diss.rate * (a.adjoint() * a);
        jumps_.push_back((std::sqrt(diss.rate) * a).sparseView());
    }
    h0_eff_ = (hamiltonian_.static_part().matrix() - Complex(0.0, 0.5) * decay).sparseView();
    if (hamiltonian_.time_dependent()) {
        rot_ = hamiltonian_.rotating().matrix().sparseView();
        rot_adj_ = hamiltonian_.rotating().matrix().adjoint().sparseView();
    }
    for (const auto& o : observables_) {
        if (!(o.op.space() == space)) throw SpaceMismatch("integrate: observable on a different space");
    }
    for (const auto& c : cumulative_ops_) {
        if (!(c.op.space() == space)) throw SpaceMismatch("integrate: cumulative on a different space");
        cumulative_sparse_.push_back(c.op.matrix().sparseView());
    }
    scratch_.resize(d, d);
    scratch2_.resize(d, d);
    trace0_ = rho_.trace().real();
    record();
}

void MasterEquationIntegrator::rhs(double t, const Matrix& rho, Matrix& out,
                                   std::span<double> dcum) {
    // With H_eff = H - i/2 sum rate A^+A the generator is
    // -i(H_eff rho - rho H_eff^+) + sum rate A rho A^+. For Hermitian rho the
    // second commutator term is the adjoint of the first, and A rho A^+ = A (A rho)^+.
    // All operators are sparse in the Fock basis.
    scratch_.noalias() = h0_eff_ * rho;
    if (hamiltonian_.time_dependent()) {
        const Complex phase = std::exp(-kI * hamiltonian_.frequency() * t);
        scratch2_.noalias() = rot_ * rho;
        scratch_ += phase * scratch2_;
        scratch2_.noalias() = rot_adj_ * rho;
        scratch_ += std::conj(phase) * scratch2_;
    }
    out.noalias() = -kI * scratch_;
    scratch2_ = out.adjoint();
    out += scratch2_;
    for (const auto& a : jumps_) {
        scratch_.noalias() = a * rho;
        scratch2_.noalias() = a * scratch_.adjoint();
        out += scratch2_;
    }
    for (std::size_t i = 0; i < cumulative_ops_.size(); ++i) {
        dcum[i] = cumulative_ops_[i].rate * sparse_trace_product(rho, cumulative_sparse_[i]);
    }
}

void MasterEquationIntegrator::record() {
    std::vector<double> values;
    values.reserve(observables_.size() + cumulative_.size());
    for (const auto& o : observables_) {
        values.push_back(real_trace_product(rho_.matrix(), o.op.matrix()));
    }
    values.insert(values.end(), cumulative_.begin(), cumulative_.end());
    series_.append(t_, values);
}

void MasterEquationIntegrator::advance_to(double t_end) {
    if (!(t_end > t_)) {
        throw InvalidArgument("integrate: final time must exceed the current time");
    }
    const double span = t_end - t_;
    const auto n = static_cast<std::size_t>(std::ceil(span / options_.dt - 1e-9));
    const double h = span / static_cast<double>(n);
    const double t_start = t_;
    const std::size_t nc = cumulative_.size();

    Matrix& rho = rho_.matrix();
    const auto d = rho.rows();
    Matrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
    std::vector<double> c1(nc), c2(nc), c3(nc), c4(nc);

    for (std::size_t step = 1; step <= n; ++step) {
        const double t = t_start + static_cast<double>(step - 1) * h;
        rhs(t, rho, k1, c1);
        tmp = rho + (0.5 * h) * k1;
        rhs(t + 0.5 * h, tmp, k2, c2);
        tmp = rho + (0.5 * h) * k2;
        rhs(t + 0.5 * h, tmp, k3, c3);
        tmp = rho + h * k3;
        rhs(t + h, tmp, k4, c4);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho_.hermitize();
        for (std::size_t i = 0; i < nc; ++i) {
            cumulative_[i] += (h / 6.0) * (c1[i] + 2.0 * c2[i] + 2.0 * c3[i] + c4[i]);
        }
        t_ = (step == n) ? t_end : t_start + static_cast<double>(step) * h;
        ++steps_;

        if (!rho.allFinite()) {
            throw ConvergenceError("integrate: NaN/Inf in density matrix at t = " +
                                   std::to_string(t_));
        }
        const double drift = std::abs(rho.trace().real() - trace0_);
        max_drift_ = std::max(max_drift_, drift);
        if (drift > options_.trace_drift_limit) {
            throw ConvergenceError("integrate: trace drift " + std::to_string(drift) +
                                   " exceeds limit at t = " + std::to_string(t_) +
                                   "; reduce the step size");
        }
        if (step == n || steps_ % options_.sample_every == 0) record();
    }
}

IntegrationResult integrate(const DensityMatrix& rho0, const Hamiltonian& hamiltonian,
                            std::span<const Dissipator> dissipators, double t_final,
                            std::span<const Observable> observables,
                            std::span<const CumulativeObservable> cumulative,
                            const IntegratorOptions& options) {
    if (!(t_final > 0.0)) throw InvalidArgument("integrate: t_final must be positive");
    MasterEquationIntegrator integrator(
        rho0, hamiltonian, {dissipators.begin(), dissipators.end()},
        {observables.begin(), observables.end()}, {cumulative.begin(), cumulative.end()}, options);
    integrator.advance_to(t_final);
    std::vector<double> cum(cumulative.size());
    for (std::size_t i = 0; i < cum.size(); ++i) cum[i] = integrator.cumulative(i);
    return {integrator.series(), integrator.state(), std::move(cum), integrator.max_trace_drift()};
}

IntegrationResult integrate(const DensityMatrix& rho0, const SystemParams& params,
                            std::span<const Dissipator> dissipators, double t_final,
                            std::span<const Observable> observables,
                            std::span<const CumulativeObservable> cumulative,
                            const IntegratorOptions& options) {
    return integrate(rho0, optomechanical_hamiltonian(params, rho0.space()), dissipators, t_final,
                     observables, cumulative, options);
}

double default_step(const SystemParams& params) {
    params.validate();
    if (params.rwa) {
        const double fastest = std::max({params.g0, params.kappa_p(), params.kappa_s()});
        if (!(fastest > 0.0)) throw InvalidArgument("default_step: all rates vanish");
        return 0.02 / fastest;
    }
    return (2.0 * std::numbers::pi / params.omega) / 50.0;
}

}  // namespace cslprobe
