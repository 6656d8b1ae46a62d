#include <doctest.h>

#include "test_util.hpp"

#include <cmath>
#include <vector>

#include "cslprobe/errors.hpp"
#include "cslprobe/lindblad.hpp"

using namespace cslprobe;

namespace {

SystemParams optical_only(double g0, double kp, double ks) {
    SystemParams p;
    p.g0 = g0;
    p.kappa_p0 = 0.0;
    p.kappa_p_ex = kp;
    p.kappa_s0 = 0.0;
    p.kappa_s_ex = ks;
    p.omega = 50.0;
    p.rwa = true;
    return p;
}

// Classical RK4 on the direct Lindblad formula, used as an independent route.
Matrix reference_rk4(const DensityMatrix& rho0, const Hamiltonian& h,
                     const std::vector<Dissipator>& diss, double t_end, std::size_t n) {
    const double dt = t_end / static_cast<double>(n);
    DensityMatrix rho = rho0;
    auto f = [&](double t, const Matrix& m) {
        return lindblad_rhs(DensityMatrix(rho0.space(), m), h.at(t), diss);
    };
    for (std::size_t i = 0; i < n; ++i) {
        const double t = dt * static_cast<double>(i);
        const Matrix& r = rho.matrix();
        const Matrix k1 = f(t, r);
        const Matrix k2 = f(t + dt / 2, r + dt / 2 * k1);
        const Matrix k3 = f(t + dt / 2, r + dt / 2 * k2);
        const Matrix k4 = f(t + dt, r + dt * k3);
        rho.matrix() = r + dt / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        rho.hermitize();
    }
    return rho.matrix();
}

}  // namespace

TEST_SUITE("lindblad") {

TEST_CASE("rhs is traceless and Hermitian") {
    FockSpace s({2, 2, 2});
    auto p = optical_only(1.3, 0.7, 2.1);
    p.rwa = false;
    p.gamma = 0.2;
    p.n_th = 0.4;
    p.n_dot_c = 0.05;
    Matrix m = Matrix::Zero(s.dim(), s.dim());
    for (std::size_t i = 0; i < s.dim(); ++i) m(i, i) = 1.0 / double(s.dim());
    m(1, 4) = Complex(0.01, 0.02);
    m(4, 1) = std::conj(m(1, 4));
    DensityMatrix rho(s, m);
    const auto d = lindblad_rhs(rho, hamiltonian_at(p, s, 0.3), standard_dissipators(p, s, true));
    CHECK(std::abs(d.trace()) < 1e-12 * rho.matrix().norm());
    CHECK((d - d.adjoint()).norm() < 1e-13);
}

TEST_CASE("single-mode decay rate") {
    FockSpace s({1, 1, 2});
    const auto p = optical_only(0.0, 0.0, 3.0);
    const auto rho = basis_state(s, {0, 0, 1});
    const auto d = lindblad_rhs(rho, hamiltonian_at(p, s, 0.0), standard_dissipators(p, s, false));
    const auto n = number(s, Mode::Signal);
    CHECK((d * n.matrix()).trace().real() == approx(-3.0));
}

TEST_CASE("collapse pump raises the phonon number at the pump rate") {
    FockSpace s({2, 1, 1});
    SystemParams p;
    p.n_dot_c = 0.37;
    const auto rho = basis_state(s, {0, 0, 0});
    const auto d = lindblad_rhs(rho, hamiltonian_at(p, s, 0.0), standard_dissipators(p, s, true));
    CHECK((d * number(s, Mode::Phonon).matrix()).trace().real() == approx(0.37));
}

TEST_CASE("space mismatch is rejected") {
    FockSpace s1({2, 2, 2});
    FockSpace s2({1, 2, 2});
    SystemParams p;
    const auto rho = basis_state(s1, {0, 0, 0});
    CHECK_THROWS_AS(lindblad_rhs(rho, hamiltonian_at(p, s2, 0.0), {}), SpaceMismatch);
}

TEST_CASE("cavity decay matches the exponential law") {
    FockSpace s({1, 1, 1});
    const double kappa = 2.0;
    const auto p = optical_only(0.0, kappa, 0.0);
    const auto diss = standard_dissipators(p, s, false);
    std::vector<Observable> obs{{"n_p", number(s, Mode::Probe)}};
    std::vector<CumulativeObservable> cum{{"emitted", kappa, number(s, Mode::Probe)}};
    IntegratorOptions o;
    o.dt = 0.002 / kappa;
    const double t = 3.0 / kappa;
    const auto r = integrate(basis_state(s, {0, 1, 0}), p, diss, t, obs, cum, o);
    CHECK(r.series.channel("n_p").back() == approx(std::exp(-3.0)).epsilon(1e-8));
    CHECK(r.cumulative_final[0] == approx(1.0 - std::exp(-3.0)).epsilon(1e-8));
}

TEST_CASE("resonant exchange oscillates as sin^2(g0 t)") {
    FockSpace s({2, 2, 2});
    const double g0 = 1.0;
    const auto p = optical_only(g0, 0.0, 0.0);
    std::vector<Observable> obs{{"n_s", number(s, Mode::Signal)}};
    IntegratorOptions o;
    o.dt = 1e-3;
    const auto r = integrate(basis_state(s, {1, 1, 0}), p, {}, 2.0, obs, {}, o);
    const auto& t = r.series.times();
    const auto& ns = r.series.channel("n_s");
    double worst = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        worst = std::max(worst, std::abs(ns[i] - std::pow(std::sin(g0 * t[i]), 2)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("thermal bath relaxes to the Bose occupancy") {
    FockSpace s({8, 1, 1});
    SystemParams p;
    p.gamma = 1.0;
    p.n_th = 0.1;
    std::vector<Observable> obs{{"n_b", number(s, Mode::Phonon)}};
    IntegratorOptions o;
    o.dt = 0.01;
    o.sample_every = 100;
    const auto r = integrate(basis_state(s, {0, 0, 0}), p, standard_dissipators(p, s, true), 30.0,
                             obs, {}, o);
    CHECK(std::abs(r.series.channel("n_b").back() - 0.1) < 1e-4);
}

TEST_CASE("sparse integrator agrees with the direct formula") {
    FockSpace s({2, 2, 2});
    auto p = optical_only(1.0, 0.6, 1.4);
    p.rwa = false;
    p.omega = 7.0;
    const auto h = optomechanical_hamiltonian(p, s);
    const auto diss = standard_dissipators(p, s, false);
    const auto rho0 = basis_state(s, {1, 1, 0});
    const double t_end = 1.5;
    const std::size_t n = 1500;
    IntegratorOptions o;
    o.dt = t_end / double(n);
    MasterEquationIntegrator integ(rho0, h, diss, {}, {}, o);
    integ.advance_to(t_end);
    const Matrix ref = reference_rk4(rho0, h, diss, t_end, n);
    CHECK(integ.steps_taken() == n);
    CHECK((integ.state().matrix() - ref).norm() < 1e-12);
}

TEST_CASE("trace and positivity are preserved along an emission run") {
    FockSpace s({2, 2, 2});
    const auto p = optical_only(1.0, 1.0, 1.8);
    IntegratorOptions o;
    o.dt = default_step(p);
    MasterEquationIntegrator integ(basis_state(s, {1, 1, 0}), optomechanical_hamiltonian(p, s),
                                   standard_dissipators(p, s, false), {}, {}, o);
    double worst_eig = 0.0;
    for (int k = 1; k <= 12; ++k) {
        integ.advance_to(double(k));
        worst_eig = std::min(worst_eig, integ.state().min_eigenvalue());
        CHECK(integ.state().hermiticity_defect() < 1e-14);
    }
    CHECK(integ.max_trace_drift() < 1e-8);
    CHECK(worst_eig >= -1e-9);
}

TEST_CASE("integrator error paths") {
    FockSpace s({1, 1, 1});
    SystemParams p;
    IntegratorOptions o;
    o.dt = 0.1;
    const auto rho = basis_state(s, {0, 1, 0});
    CHECK_THROWS_AS(integrate(rho, p, {}, 0.0, {}, {}, o), InvalidArgument);
    o.dt = 0.0;
    CHECK_THROWS_AS(integrate(rho, p, {}, 1.0, {}, {}, o), InvalidArgument);

    Matrix bad = Matrix::Zero(s.dim(), s.dim());
    bad(0, 0) = std::nan("");
    o.dt = 0.1;
    CHECK_THROWS_AS(integrate(rho, Hamiltonian(Operator(s, bad)), {}, 1.0, {}, {}, o),
                    ConvergenceError);

    // A non-Hermitian generator leaks trace and trips the drift guard.
    Matrix leak = Matrix::Zero(s.dim(), s.dim());
    leak(s.index(std::vector<int>{0, 1, 0}), s.index(std::vector<int>{0, 1, 0})) = Complex(0.0, -1.0);
    CHECK_THROWS_AS(integrate(rho, Hamiltonian(Operator(s, leak)), {}, 1.0, {}, {}, o),
                    ConvergenceError);

    std::vector<Dissipator> neg{{annihilation(s, 1), -1.0}};
    CHECK_THROWS_AS(integrate(rho, p, neg, 1.0, {}, {}, o), InvalidArgument);
}

TEST_CASE("time series invariants") {
    TimeSeries ts({"a", "b"});
    const double v[] = {1.0, 2.0};
    ts.append(0.0, v);
    CHECK_THROWS_AS(ts.append(0.0, v), InvalidArgument);
    const double w[] = {1.0};
    CHECK_THROWS_AS(ts.append(1.0, w), InvalidArgument);
    CHECK_THROWS_AS(ts.channel("c"), InvalidArgument);
    CHECK(ts.size() == 1);
}

TEST_CASE("default step policy") {
    auto p = optical_only(2.0, 1.0, 4.0);
    CHECK(default_step(p) == approx(0.02 / 4.0));
    p.rwa = false;
    CHECK(default_step(p) == approx(2.0 * std::acos(-1.0) / 50.0 / 50.0));
}

}  // TEST_SUITE
