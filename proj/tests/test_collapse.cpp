#include <doctest.h>

#include "test_util.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "cslprobe/collapse.hpp"
#include "cslprobe/errors.hpp"

using namespace cslprobe;

namespace {

constexpr double kPi = std::numbers::pi;

const Cuboid kBeam{1.21e-6, 0.22e-6, 0.22e-6, constants::silicon_density};

double beam_x0() { return zero_point_motion(136e-18, 2.0 * kPi * 5.3e9); }

double rel(double a, double b) { return std::abs(a / b - 1.0); }

}  // namespace

TEST_SUITE("collapse") {

TEST_CASE("zero-point motion of the reference beam") {
    CHECK(beam_x0() == approx(3.4121e-15).epsilon(1e-4));
    CHECK_THROWS_AS(zero_point_motion(0.0, 1.0), InvalidArgument);
}

TEST_CASE("cuboid closed form matches the Fourier-space integral") {
    const ResonatorGeometry g(kBeam);
    NumericOptions o;
    o.rel_tol = 1e-9;
    for (double rc : {1e-9, 1e-8, 1e-7, 1e-6, 1e-5}) {
        const double closed = d_cuboid(kBeam.L1, kBeam.L2, kBeam.L3, kBeam.density, rc, beam_x0());
        const double numeric = d_csl_numeric(g, rc, beam_x0(), o);
        CAPTURE(rc);
        CHECK(rel(closed, numeric) < 1e-3);
    }
}

TEST_CASE("sphere closed form matches the radial integral") {
    const Sphere s{0.5e-6, constants::silica_density};
    const ResonatorGeometry g(s);
    NumericOptions o;
    o.rel_tol = 1e-9;
    for (double rc : {1e-9, 1e-8, 1e-7, 1e-6, 1e-5}) {
        const double closed = d_sphere(s.R, s.density, rc, beam_x0());
        CAPTURE(rc);
        CHECK(rel(closed, d_csl_numeric(g, rc, beam_x0(), o)) < 1e-3);
    }
}

TEST_CASE("point-mass limit for r_c much larger than the body") {
    const double rc = 1e-3;
    const double x0 = beam_x0();
    const ResonatorGeometry beam(kBeam);
    const double m = beam.mass();
    const double point = m * m * x0 * x0 / (2.0 * constants::u * constants::u * rc * rc);
    CHECK(rel(d_cuboid(kBeam.L1, kBeam.L2, kBeam.L3, kBeam.density, rc, x0), point) < 1e-6);

    const Sphere s{0.3e-6, 2200.0};
    const double ms = ResonatorGeometry(s).mass();
    const double point_s = ms * ms * x0 * x0 / (2.0 * constants::u * constants::u * rc * rc);
    CHECK(rel(d_sphere(s.R, s.density, rc, x0), point_s) < 1e-6);
}

TEST_CASE("series and direct branches join smoothly") {
    // The transverse factor switches form at L / (2 r_c) = 0.1.
    const double x0 = beam_x0();
    const double L = 0.22e-6;
    const double edge = L / 0.2;
    const double below = d_cuboid(L, L, L, 2330.0, edge * (1 + 1e-9), x0);
    const double above = d_cuboid(L, L, L, 2330.0, edge * (1 - 1e-9), x0);
    CHECK(rel(below, above) < 1e-7);

    const double R = 0.2e-6;
    const double sedge = R / std::sqrt(0.1);
    CHECK(rel(d_sphere(R, 2200.0, sedge * (1 + 1e-9), x0), d_sphere(R, 2200.0, sedge * (1 - 1e-9), x0)) <
          1e-7);
}

TEST_CASE("printed forms are distinct from the integrals") {
    const double x0 = beam_x0();
    const double d = d_cuboid(kBeam.L1, kBeam.L2, kBeam.L3, kBeam.density, 1e-7, x0);
    const double printed = d_cuboid_as_printed(kBeam.L1, kBeam.L2, kBeam.L3, kBeam.density, 1e-7, x0);
    CHECK(rel(printed, d) > 0.1);
    CHECK(d_sphere_as_printed(1e-6, 2200.0, 1e-7, x0) / d_sphere(1e-6, 2200.0, 1e-7, x0) ==
          approx(14.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("closed-form dispatch and the reference beam value") {
    const ResonatorGeometry g(kBeam);
    const double d = d_closed_form(g, 1e-7, beam_x0());
    CHECK(d == d_cuboid(kBeam.L1, kBeam.L2, kBeam.L3, kBeam.density, 1e-7, beam_x0()));
    // Frozen from the Fourier-space oracle.
    CHECK(d == approx(5.0805e5).epsilon(1e-3));
}

TEST_CASE("D scales as x0 squared and density squared") {
    const double d1 = d_cuboid(1e-6, 1e-6, 1e-6, 1000.0, 1e-7, 1e-15);
    CHECK(d_cuboid(1e-6, 1e-6, 1e-6, 1000.0, 1e-7, 2e-15) == approx(4.0 * d1).epsilon(1e-14));
    CHECK(d_cuboid(1e-6, 1e-6, 1e-6, 3000.0, 1e-7, 1e-15) == approx(9.0 * d1).epsilon(1e-14));
}

TEST_CASE("decoherence kernel limits") {
    const double lam = 2.0, rc = 1e-7;
    const double sat = lam * std::pow(4.0 * kPi * rc * rc, -1.5);
    CHECK(decoherence_kernel(lam, rc, 0.0) == 0.0);
    CHECK(decoherence_kernel(lam, rc, 1e-4) == approx(sat).epsilon(1e-14));
    const double dx = 1e-11;
    CHECK(decoherence_kernel(lam, rc, dx) == approx(sat * dx * dx / (4.0 * rc * rc)).epsilon(1e-6));
    CHECK(decoherence_kernel(lam, rc, 3e-8) < decoherence_kernel(lam, rc, 6e-8));
}

TEST_CASE("Bose occupancy limits") {
    const double omega = 2.0 * kPi * 5.3e9;
    CHECK(bose_occupancy(omega, 0.0) == 0.0);
    const double x = constants::hbar * omega / (constants::k_B * 300.0);
    CHECK(bose_occupancy(omega, 300.0) == approx(1.0 / x - 0.5).epsilon(1e-4));
    const double g = 0.7;
    const double low = thermal_flux_low_t(g, omega, 0.01);
    CHECK(rel(thermal_flux(g, omega, 0.01), low) < 1e-10);
    CHECK(thermal_flux(g, omega, 0.0) == 0.0);
    CHECK_THROWS_AS(bose_occupancy(omega, -1.0), InvalidArgument);
}

TEST_CASE("Diosi-Penrose rate and its inverse") {
    const double x0 = beam_x0(), a = constants::silicon_lattice;
    const double m = 136e-18, rho = 2330.0;
    const double r = 1e-12;
    const double expected = x0 * x0 * constants::G / (6.0 * std::sqrt(kPi) * constants::hbar) * (a / r) * m * rho;
    CHECK(d_dp(x0, a, r, m, rho) == approx(expected).epsilon(1e-14));
    CHECK(dp_cutoff_from_noise(d_dp(x0, a, r, m, rho), x0, a, m, rho) == approx(r).epsilon(1e-12));
    CHECK(d_dp(x0, a, 2.0 * r, m, rho) == approx(0.5 * d_dp(x0, a, r, m, rho)));
    CHECK_THROWS_AS(d_dp(x0, a, 0.0, m, rho), InvalidArgument);
}

TEST_CASE("GRW heating is linear in nucleon number") {
    const double h = grw_heating(1e10, 1e-16, 1e-15, 1e-7);
    CHECK(h == approx(1e10 * 1e-16 * 1e-30 / 4e-14));
    CHECK(grw_heating(2e10, 1e-16, 1e-15, 1e-7) == approx(2.0 * h));
}

TEST_CASE("collapse parameter validation") {
    CollapseParams p;
    p.lambda_c = 1e-10;
    CHECK_NOTHROW(p.validate());
    p.r_c = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p.r_c = 1e-7;
    p.model = DiosiPenroseModel{0.0};
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    CHECK_THROWS_AS(ResonatorGeometry(Cuboid{0.0, 1.0, 1.0, 1.0}), InvalidArgument);
}

TEST_CASE("heating map crossings and roll-off") {
    HeatingMapSpec spec;
    for (int i = 0; i <= 80; ++i) spec.diameters.push_back(1e-8 * std::pow(1e4, i / 80.0));
    spec.temperatures = {0.01, 300.0};
    spec.bounds = default_collapse_bounds();
    const auto rows = heating_map(spec);
    REQUIRE(rows.size() == 81);

    std::size_t bassi = 0;
    while (spec.bounds[bassi].name != "bassi") ++bassi;
    auto sign_changes = [&](std::size_t t) {
        int n = 0;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const bool a = rows[i - 1].csl[bassi] > rows[i - 1].thermal[t];
            const bool b = rows[i].csl[bassi] > rows[i].thermal[t];
            n += a != b;
        }
        return n;
    };
    CHECK(sign_changes(0) >= 1);
    CHECK(sign_changes(1) == 0);

    for (const auto& r : rows) {
        CHECK(r.omega == approx(spec.c_sound / (0.5 * r.diameter)));
        CHECK(r.gamma == approx(r.omega / spec.Q));
    }

    const auto serial = heating_map(spec, Execution::Serial);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(serial[i].d_sphere == rows[i].d_sphere);
        CHECK(serial[i].thermal == rows[i].thermal);
        CHECK(serial[i].csl == rows[i].csl);
        CHECK(serial[i].grw == rows[i].grw);
    }
}

}  // TEST_SUITE
