#pragma once

#include <cstddef>
#include <functional>

namespace cslprobe {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  ///< estimated absolute error
    std::size_t evaluations = 0;
    std::size_t panels = 0;
};

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    std::size_t initial_panels = 1;
    std::size_t max_panels = std::size_t{1} << 22;
};

/// Globally adaptive Gauss-Legendre quadrature on [a, b].
///
/// Each panel is integrated with a 20-point rule both whole and as two halves;
/// the difference is the panel's error estimate. The panel with the largest
/// estimate is bisected until the summed estimate meets
/// max(abs_tol, rel_tol * |value|). Throws ConvergenceError when max_panels is hit.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options = {});

/// Fixed n-point Gauss-Legendre rule on [a, b] (n in [1, 64]).
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int n);

}  // namespace cslprobe
