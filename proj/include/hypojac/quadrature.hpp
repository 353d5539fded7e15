#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "hypojac/errors.hpp"

namespace hypojac::quadrature {

struct Options {
    double abs_tol = 1e-12;
    /// Measured against ∫|f|, so vanishing integrals still terminate.
    double rel_tol = 1e-13;
    std::size_t max_panels = 4000;
};

struct Result {
    std::complex<double> value;
    double abs_error = 0.0;
    double abs_integral = 0.0;  // ∫|f|
    std::size_t panels = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss-Legendre rule.
inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double lo;
    double hi;
    std::complex<double> value;
    double error;
    double abs_value;

    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel evaluate_panel(F& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const std::complex<double> fc = f(center);
    std::complex<double> kronrod = fc * kKronrodWeights[7];
    std::complex<double> gauss = fc * kGaussWeights[3];
    double abs_sum = std::abs(fc) * kKronrodWeights[7];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kNodes[j];
        const std::complex<double> f1 = f(center - dx);
        const std::complex<double> f2 = f(center + dx);
        kronrod += (f1 + f2) * kKronrodWeights[j];
        abs_sum += (std::abs(f1) + std::abs(f2)) * kKronrodWeights[j];
        if (j % 2 == 1) {
            gauss += (f1 + f2) * kGaussWeights[j / 2];
        }
    }
    return Panel{lo, hi, kronrod * half, std::abs((kronrod - gauss) * half), abs_sum * std::abs(half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of a complex integrand.
///
/// `breakpoints` is a sorted list of panel edges (including both endpoints);
/// the integrand should be smooth inside each initial panel. The panel with
/// the largest error estimate is bisected until the summed error satisfies
/// min(abs_tol, rel_tol·∫|f|) or drops to the roundoff floor.
template <class F>
Result integrate(F&& f, std::span<const double> breakpoints, const Options& opts = {}) {
    if (breakpoints.size() < 2) {
        throw DomainError("quadrature needs at least two breakpoints");
    }
    std::priority_queue<detail::Panel> heap;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] > breakpoints[i]) {
            heap.push(detail::evaluate_panel(f, breakpoints[i], breakpoints[i + 1]));
        }
    }

    const auto totals = [&heap] {
        auto copy = heap;
        Result r;
        r.panels = copy.size();
        while (!copy.empty()) {
            r.value += copy.top().value;
            r.abs_error += copy.top().error;
            r.abs_integral += copy.top().abs_value;
            copy.pop();
        }
        return r;
    };

    double error = 0.0;
    double abs_integral = 0.0;
    {
        auto copy = heap;
        while (!copy.empty()) {
            error += copy.top().error;
            abs_integral += copy.top().abs_value;
            copy.pop();
        }
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    while (!heap.empty()) {
        const double target = std::max(std::min(opts.abs_tol, opts.rel_tol * abs_integral),
                                       50.0 * eps * abs_integral);
        if (error <= target) {
            return totals();
        }
        if (heap.size() >= opts.max_panels) {
            break;
        }
        const detail::Panel worst = heap.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            break;
        }
        heap.pop();
        const auto left = detail::evaluate_panel(f, worst.lo, mid);
        const auto right = detail::evaluate_panel(f, mid, worst.hi);
        error += left.error + right.error - worst.error;
        abs_integral += left.abs_value + right.abs_value - worst.abs_value;
        heap.push(left);
        heap.push(right);
    }
    const Result best = totals();
    throw PrecisionError("adaptive quadrature did not converge", best.value.real(), best.abs_error);
}

}  // namespace hypojac::quadrature
