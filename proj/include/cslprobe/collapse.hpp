#pragma once

// Collapse-model heating rates for concrete resonator geometries.
//
// The CSL decoherence operator D is dimensionless: it turns the collapse rate
// lambda_c (1/s) into a phonon flux n_dot_c = lambda_c * D. It is available as
// a Fourier-space quadrature (d_csl_numeric), which serves as the oracle for
// the sphere and cuboid closed forms.

#include <string>
#include <variant>
#include <vector>

#include "cslprobe/parallel.hpp"

namespace cslprobe {

namespace constants {
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double k_B = 1.380649e-23;         // J/K
inline constexpr double G = 6.67430e-11;            // m^3 kg^-1 s^-2
inline constexpr double u = 1.66e-27;               // kg, atomic mass unit as used for D
inline constexpr double c_light = 299792458.0;      // m/s
inline constexpr double silicon_density = 2330.0;   // kg/m^3
inline constexpr double silica_density = 2200.0;    // kg/m^3
inline constexpr double silica_sound_speed = 3000.0;  // m/s
inline constexpr double silicon_lattice = 5.431e-10;  // m
}  // namespace constants

struct Cuboid {
    double L1 = 0.0;  ///< m
    double L2 = 0.0;  ///< m
    double L3 = 0.0;  ///< m, direction of motion
    double density = 0.0;
};

struct Sphere {
    double R = 0.0;
    double density = 0.0;
};

class ResonatorGeometry {
public:
    ResonatorGeometry(Cuboid c);
    ResonatorGeometry(Sphere s);

    const std::variant<Cuboid, Sphere>& shape() const noexcept { return shape_; }
    double density() const;
    double volume() const;
    double mass() const { return density() * volume(); }

private:
    std::variant<Cuboid, Sphere> shape_;
};

struct CslModel {};
struct DiosiPenroseModel {
    double r_dp = 0.0;       ///< short-distance cutoff, m
    double lattice_a = constants::silicon_lattice;
};
struct GrwLinearModel {
    double lambda_grw = 1e-16;  ///< single-nucleon rate, 1/s
};

struct CollapseParams {
    double lambda_c = 0.0;
    double r_c = 1e-7;
    std::variant<CslModel, DiosiPenroseModel, GrwLinearModel> model = CslModel{};

    void validate() const;
};

/// sqrt(hbar / (2 m Omega)).
double zero_point_motion(double mass, double omega);

/// lambda (4 pi r_c^2)^{-3/2} (1 - exp(-dx^2 / 4 r_c^2)). The prefactor carries
/// units of m^-3; lambda is taken to absorb that convention.
double decoherence_kernel(double lambda, double r_c, double dx);

struct NumericOptions {
    double rel_tol = 1e-6;
    /// Integration runs over |k_i| <= k_extent / r_c.
    double k_extent = 40.0;
};

/// (4 pi)^{3/2} r_c^3 x0^2 / u^2 * int d^3k/(2 pi)^3 k_z^2 e^{-k^2 r_c^2} |rho~(k)|^2.
/// The cuboid integral separates into three 1-D integrals; the sphere reduces to a radial one.
double d_csl_numeric(const ResonatorGeometry& geometry, double r_c, double x0,
                     const NumericOptions& options = {});

/// Closed form of the cuboid integral:
/// 32 r_c^4 rho^2 x0^2 / u^2 (1 - e^{-L3^2/4r_c^2}) f(L1/2r_c) f(L2/2r_c),
/// f(x) = e^{-x^2} + sqrt(pi) x erf(x) - 1.
double d_cuboid(double L1, double L2, double L3, double density, double r_c, double x0);

/// The same expression with f(x) = e^{-x^2} - sqrt(pi) x erf(x) - 1, as it is
/// commonly printed. Kept for comparison output only; it does not match the integral.
double d_cuboid_as_printed(double L1, double L2, double L3, double density, double r_c, double x0);

/// Closed form of the sphere integral:
/// 16 pi^2 R^2 r_c^2 rho^2 x0^2 / (3 u^2) (1 - 2r_c^2/R^2 + e^{-R^2/r_c^2}(1 + 2r_c^2/R^2)).
double d_sphere(double R, double density, double r_c, double x0);

/// Same bracket with the 14 pi^2 / 3 prefactor as commonly printed (comparison only).
double d_sphere_as_printed(double R, double density, double r_c, double x0);

double d_closed_form(const ResonatorGeometry& geometry, double r_c, double x0);

/// Diosi-Penrose rate x0^2 G / (6 sqrt(pi) hbar) (a / r_dp) m rho, in 1/s.
double d_dp(double x0, double lattice_a, double r_dp, double mass, double density);

/// Inverse of d_dp in r_dp: the cutoff at which the DP flux equals `noise_flux`.
double dp_cutoff_from_noise(double noise_flux, double x0, double lattice_a, double mass,
                            double density);

/// lambda_grw * N * x0^2 / (4 r_c^2).
double grw_heating(double n_nucleons, double lambda_grw, double x0, double r_c);

/// (e^{hbar Omega / k_B T} - 1)^{-1}; zero at T = 0.
double bose_occupancy(double omega, double temperature);
/// Gamma * bose_occupancy.
double thermal_flux(double gamma, double omega, double temperature);
/// Gamma * e^{-hbar Omega / k_B T}.
double thermal_flux_low_t(double gamma, double omega, double temperature);

double csl_phonon_flux(double lambda_c, double d);

struct CollapseBound {
    std::string name;
    double lambda = 0.0;
};

struct HeatingMapSpec {
    std::vector<double> diameters;    ///< m
    std::vector<double> temperatures; ///< K
    double Q = 1e7;
    double c_sound = constants::silica_sound_speed;
    double density = constants::silica_density;
    double r_c = 1e-7;
    std::vector<CollapseBound> bounds;
    double lambda_grw = 1e-16;
};

struct HeatingMapRow {
    double diameter = 0.0;
    double omega = 0.0;
    double gamma = 0.0;
    double mass = 0.0;
    double x0 = 0.0;
    double d_sphere = 0.0;
    std::vector<double> thermal;  ///< per temperature, phonons/s
    std::vector<double> csl;      ///< per bound, phonons/s
    double grw = 0.0;
};

/// Adler (1e-8 +/- 2) and Bassi et al. (1e-10 +/- 2) bands.
std::vector<CollapseBound> default_collapse_bounds();

/// Breathing-mode silica sphere: Omega = c/R, Gamma = Omega/Q, thermal heating
/// Gamma n_th(T), CSL heating lambda D_sphere, GRW line. One row per diameter.
std::vector<HeatingMapRow> heating_map(const HeatingMapSpec& spec,
                                       Execution exec = Execution::OpenMP, int jobs = 0);

}  // namespace cslprobe
