#include "cslprobe/collapse.hpp"

#include <cmath>
#include <numbers>

#include "cslprobe/errors.hpp"
#include "cslprobe/quadrature.hpp"

namespace cslprobe {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrtPi = std::sqrt(kPi);

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string(name) + " must be positive and finite");
    }
}

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string(name) + " must be nonnegative and finite");
    }
}

// e^{-x^2} + sqrt(pi) x erf(x) - 1, with the series sum_{m>=1} (-1)^{m+1} x^{2m} / (m! (2m-1))
// for small x where the direct form cancels.
double cuboid_transverse(double x) {
    if (x < 0.1) {
        const double x2 = x * x;
        double term = 1.0, sum = 0.0;
        for (int m = 1; m <= 10; ++m) {
            term *= (m == 1 ? x2 : -x2 / m);
            sum += term / (2.0 * m - 1.0);
        }
        return sum;
    }
    return std::exp(-x * x) + kSqrtPi * x * std::erf(x) - 1.0;
}

// 1 - 2/s + e^{-s}(1 + 2/s), series sum_{k>=2} (-1)^k (k-1) s^k / (k+1)! for small s.
double sphere_bracket(double s) {
    if (s < 0.1) {
        double sum = 0.0;
        double pow_s = s;
        double fact = 2.0;  // (k+1)! starting at k = 1
        for (int k = 2; k <= 12; ++k) {
            pow_s *= s;
            fact *= (k + 1);
            sum += ((k % 2 == 0) ? 1.0 : -1.0) * (k - 1) * pow_s / fact;
        }
        return sum;
    }
    return 1.0 - 2.0 / s + std::exp(-s) * (1.0 + 2.0 / s);
}

// L sinc(kL/2) = 2 sin(kL/2) / k.
double box_transform(double k, double L) {
    const double h = 0.5 * k * L;
    if (std::abs(h) < 1e-4) return L * (1.0 - h * h / 6.0);
    return 2.0 * std::sin(h) / k;
}

// (sin y - y cos y) / y^3
double sphere_shape(double y) {
    if (std::abs(y) < 1e-2) {
        const double y2 = y * y;
        return 1.0 / 3.0 - y2 / 30.0 + y2 * y2 / 840.0;
    }
    return (std::sin(y) - y * std::cos(y)) / (y * y * y);
}

}  // namespace

ResonatorGeometry::ResonatorGeometry(Cuboid c) : shape_(c) {
    require_positive(c.L1, "Cuboid.L1");
    require_positive(c.L2, "Cuboid.L2");
    require_positive(c.L3, "Cuboid.L3");
    require_nonnegative(c.density, "Cuboid.density");
}

ResonatorGeometry::ResonatorGeometry(Sphere s) : shape_(s) {
    require_positive(s.R, "Sphere.R");
    require_nonnegative(s.density, "Sphere.density");
}

double ResonatorGeometry::density() const {
    return std::visit([](const auto& s) { return s.density; }, shape_);
}

double ResonatorGeometry::volume() const {
    if (const auto* c = std::get_if<Cuboid>(&shape_)) return c->L1 * c->L2 * c->L3;
    const auto& s = std::get<Sphere>(shape_);
    return 4.0 / 3.0 * kPi * s.R * s.R * s.R;
}

void CollapseParams::validate() const {
    require_positive(r_c, "r_c");
    require_nonnegative(lambda_c, "lambda_c");
    if (const auto* dp = std::get_if<DiosiPenroseModel>(&model)) {
        require_positive(dp->r_dp, "r_dp");
        require_positive(dp->lattice_a, "lattice_a");
    } else if (const auto* grw = std::get_if<GrwLinearModel>(&model)) {
        require_nonnegative(grw->lambda_grw, "lambda_grw");
    }
}

double zero_point_motion(double mass, double omega) {
    require_positive(mass, "mass");
    require_positive(omega, "omega");
    return std::sqrt(constants::hbar / (2.0 * mass * omega));
}

double decoherence_kernel(double lambda, double r_c, double dx) {
    require_positive(r_c, "r_c");
    const double prefactor = lambda * std::pow(4.0 * kPi * r_c * r_c, -1.5);
    return prefactor * -std::expm1(-dx * dx / (4.0 * r_c * r_c));
}

double d_csl_numeric(const ResonatorGeometry& geometry, double r_c, double x0,
                     const NumericOptions& options) {
    require_positive(r_c, "r_c");
    require_nonnegative(x0, "x0");
    const double rho = geometry.density();
    const double prefactor = std::pow(4.0 * kPi, 1.5) * r_c * r_c * r_c * x0 * x0 /
                             (constants::u * constants::u) / std::pow(2.0 * kPi, 3);
    if (rho == 0.0 || x0 == 0.0) return 0.0;
    const double k_max = options.k_extent / r_c;
    const double a2 = r_c * r_c;

    QuadratureOptions q;
    q.rel_tol = options.rel_tol;

    if (const auto* c = std::get_if<Cuboid>(&geometry.shape())) {
        // |rho~|^2 = rho^2 prod_i L_i^2 sinc^2(k_i L_i / 2); even integrands, so 2 x [0, k_max].
        auto transverse = [&](double L) {
            q.initial_panels = static_cast<std::size_t>(std::ceil(k_max * L / kPi)) + 1;
            return 2.0 * integrate_adaptive(
                             [&](double k) {
                                 const double t = box_transform(k, L);
                                 return std::exp(-a2 * k * k) * t * t;
                             },
                             0.0, k_max, q)
                             .value;
        };
        const double i1 = transverse(c->L1);
        const double i2 = transverse(c->L2);
        q.initial_panels = static_cast<std::size_t>(std::ceil(k_max * c->L3 / kPi)) + 1;
        const double L3 = c->L3;
        const double i3 = 2.0 * integrate_adaptive(
                                    [&](double k) {
                                        const double t = k * box_transform(k, L3);
                                        return std::exp(-a2 * k * k) * t * t;
                                    },
                                    0.0, k_max, q)
                                    .value;
        return prefactor * rho * rho * i1 * i2 * i3;
    }

    const auto& s = std::get<Sphere>(geometry.shape());
    // rho~(k) = 4 pi rho R^3 (sin kR - kR cos kR)/(kR)^3; angular average of k_z^2 is k^2/3.
    const double R = s.R;
    q.initial_panels = static_cast<std::size_t>(std::ceil(k_max * R / kPi)) + 1;
    const double radial = integrate_adaptive(
                              [&](double k) {
                                  const double ft = 4.0 * kPi * R * R * R * sphere_shape(k * R);
                                  return 4.0 * kPi * k * k * (k * k / 3.0) *
                                         std::exp(-a2 * k * k) * ft * ft;
                              },
                              0.0, k_max, q)
                              .value;
    return prefactor * rho * rho * radial;
}

double d_cuboid(double L1, double L2, double L3, double density, double r_c, double x0) {
    require_positive(L1, "L1");
    require_positive(L2, "L2");
    require_positive(L3, "L3");
    require_positive(r_c, "r_c");
    const double pref = 32.0 * std::pow(r_c, 4) * density * density * x0 * x0 /
                        (constants::u * constants::u);
    const double axial = -std::expm1(-L3 * L3 / (4.0 * r_c * r_c));
    return pref * axial * cuboid_transverse(L1 / (2.0 * r_c)) *
           cuboid_transverse(L2 / (2.0 * r_c));
}

double d_cuboid_as_printed(double L1, double L2, double L3, double density, double r_c,
                           double x0) {
    require_positive(L1, "L1");
    require_positive(L2, "L2");
    require_positive(L3, "L3");
    require_positive(r_c, "r_c");
    auto bracket = [&](double L) {
        const double x = L / (2.0 * r_c);
        return std::exp(-x * x) - kSqrtPi * x * std::erf(x) - 1.0;
    };
    const double pref = 32.0 * std::pow(r_c, 4) * density * density * x0 * x0 /
                        (constants::u * constants::u);
    const double axial = -std::expm1(-L3 * L3 / (4.0 * r_c * r_c));
    // Both transverse brackets are negative; their product is positive.
    return std::abs(pref * axial * bracket(L1) * bracket(L2));
}

double d_sphere(double R, double density, double r_c, double x0) {
    require_positive(R, "R");
    require_positive(r_c, "r_c");
    const double s = R * R / (r_c * r_c);
    return 16.0 * kPi * kPi * R * R * r_c * r_c * density * density * x0 * x0 /
           (3.0 * constants::u * constants::u) * sphere_bracket(s);
}

double d_sphere_as_printed(double R, double density, double r_c, double x0) {
    return d_sphere(R, density, r_c, x0) * 14.0 / 16.0;
}

double d_closed_form(const ResonatorGeometry& geometry, double r_c, double x0) {
    if (const auto* c = std::get_if<Cuboid>(&geometry.shape())) {
        return d_cuboid(c->L1, c->L2, c->L3, c->density, r_c, x0);
    }
    const auto& s = std::get<Sphere>(geometry.shape());
    return d_sphere(s.R, s.density, r_c, x0);
}

namespace {
double dp_coefficient(double x0, double lattice_a, double mass, double density) {
    return x0 * x0 * constants::G / (6.0 * kSqrtPi * constants::hbar) * lattice_a * mass * density;
}
}  // namespace

double d_dp(double x0, double lattice_a, double r_dp, double mass, double density) {
    require_positive(x0, "x0");
    require_positive(lattice_a, "lattice_a");
    require_positive(r_dp, "r_dp");
    require_positive(mass, "mass");
    require_positive(density, "density");
    return dp_coefficient(x0, lattice_a, mass, density) / r_dp;
}

double dp_cutoff_from_noise(double noise_flux, double x0, double lattice_a, double mass,
                            double density) {
    require_positive(noise_flux, "noise_flux");
    require_positive(x0, "x0");
    require_positive(lattice_a, "lattice_a");
    require_positive(mass, "mass");
    require_positive(density, "density");
    return dp_coefficient(x0, lattice_a, mass, density) / noise_flux;
}

double grw_heating(double n_nucleons, double lambda_grw, double x0, double r_c) {
    require_nonnegative(n_nucleons, "n_nucleons");
    require_nonnegative(lambda_grw, "lambda_grw");
    require_positive(r_c, "r_c");
    return lambda_grw * n_nucleons * x0 * x0 / (4.0 * r_c * r_c);
}

double bose_occupancy(double omega, double temperature) {
    require_nonnegative(temperature, "temperature");
    require_positive(omega, "omega");
    if (temperature == 0.0) return 0.0;
    const double x = constants::hbar * omega / (constants::k_B * temperature);
    return 1.0 / std::expm1(x);
}

double thermal_flux(double gamma, double omega, double temperature) {
    require_nonnegative(gamma, "gamma");
    return gamma * bose_occupancy(omega, temperature);
}

double thermal_flux_low_t(double gamma, double omega, double temperature) {
    require_nonnegative(gamma, "gamma");
    require_nonnegative(temperature, "temperature");
    if (temperature == 0.0) return 0.0;
    return gamma * std::exp(-constants::hbar * omega / (constants::k_B * temperature));
}

double csl_phonon_flux(double lambda_c, double d) {
    require_nonnegative(lambda_c, "lambda_c");
    require_nonnegative(d, "D");
    return lambda_c * d;
}

std::vector<CollapseBound> default_collapse_bounds() {
    return {
        {"adler_lo", 1e-10}, {"adler", 1e-8},  {"adler_hi", 1e-6},
        {"bassi_lo", 1e-12}, {"bassi", 1e-10}, {"bassi_hi", 1e-8},
    };
}

std::vector<HeatingMapRow> heating_map(const HeatingMapSpec& spec, Execution exec, int jobs) {
    require_positive(spec.Q, "Q");
    require_positive(spec.c_sound, "c_sound");
    require_positive(spec.density, "density");
    require_positive(spec.r_c, "r_c");
    for (double d : spec.diameters) require_positive(d, "diameter");
    for (double t : spec.temperatures) require_nonnegative(t, "temperature");

    return parallel_map(
        spec.diameters.size(),
        [&](std::size_t i) {
            HeatingMapRow row;
            row.diameter = spec.diameters[i];
            const double R = 0.5 * row.diameter;
            row.omega = spec.c_sound / R;
            row.gamma = row.omega / spec.Q;
            row.mass = spec.density * 4.0 / 3.0 * kPi * R * R * R;
            row.x0 = zero_point_motion(row.mass, row.omega);
            row.d_sphere = d_sphere(R, spec.density, spec.r_c, row.x0);
            for (double T : spec.temperatures) {
                row.thermal.push_back(thermal_flux(row.gamma, row.omega, T));
            }
            for (const auto& b : spec.bounds) {
                row.csl.push_back(csl_phonon_flux(b.lambda, row.d_sphere));
            }
            row.grw = grw_heating(row.mass / constants::u, spec.lambda_grw, row.x0, spec.r_c);
            return row;
        },
        exec, jobs);
}

}  // namespace cslprobe
