#include "cslprobe/quadrature.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "cslprobe/errors.hpp"

namespace cslprobe {

namespace {

struct Rule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Newton iteration on P_n from the Chebyshev initial guess.
Rule make_rule(int n) {
    Rule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        r.nodes[lo] = -x;
        r.nodes[hi] = x;
        r.weights[lo] = w;
        r.weights[hi] = w;
    }
    return r;
}

const Rule& rule(int n) {
    static std::array<Rule, 65> cache;
    static std::array<std::once_flag, 65> flags;
    const auto idx = static_cast<std::size_t>(n);
    std::call_once(flags[idx], [&] { cache[idx] = make_rule(n); });
    return cache[idx];
}

constexpr int kPanelOrder = 20;

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int n) {
    if (n < 1 || n > 64) throw InvalidArgument("gauss_legendre: order must be in [1, 64]");
    if (n == 1) return (b - a) * f(0.5 * (a + b));
    const Rule& r = rule(n);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) sum += r.weights[i] * f(mid + half * r.nodes[i]);
    return half * sum;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    const QuadratureOptions& options) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw InvalidArgument("integrate_adaptive: bounds must be finite");
    }
    QuadratureResult out;
    if (a == b) return out;
    const double sign = b > a ? 1.0 : -1.0;
    if (b < a) std::swap(a, b);

    auto evaluate = [&](double lo, double hi) {
        const double mid = 0.5 * (lo + hi);
        const double whole = gauss_legendre(f, lo, hi, kPanelOrder);
        const double halves =
            gauss_legendre(f, lo, mid, kPanelOrder) + gauss_legendre(f, mid, hi, kPanelOrder);
        out.evaluations += 3 * kPanelOrder;
        return Panel{lo, hi, halves, std::abs(halves - whole)};
    };

    std::priority_queue<Panel> heap;
    const std::size_t n0 = std::max<std::size_t>(1, options.initial_panels);
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i < n0; ++i) {
        const double lo = a + (b - a) * static_cast<double>(i) / static_cast<double>(n0);
        const double hi = (i + 1 == n0) ? b : a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(n0);
        Panel p = evaluate(lo, hi);
        total += p.value;
        total_err += p.error;
        heap.push(p);
    }

    auto target = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(total)); };
    while (total_err > target()) {
        if (heap.size() >= options.max_panels) {
            throw ConvergenceError("integrate_adaptive: panel budget exhausted (error estimate " +
                                   std::to_string(total_err) + ")");
        }
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw ConvergenceError("integrate_adaptive: panel width reached machine precision");
        }
        const Panel left = evaluate(worst.a, mid);
        const Panel right = evaluate(mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed the drift of the running updates.
    out.panels = heap.size();
    double sum = 0.0, err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    out.value = sign * sum;
    out.error = err;
    return out;
}

}  // namespace cslprobe
