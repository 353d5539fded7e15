#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "hypojac/errors.hpp"
#include "hypojac/quadrature.hpp"
#include "hypojac/special.hpp"

namespace hypojac {

/// A point of [0,1] carried together with u = sqrt(1 - x).
///
/// Radial integrals are evaluated in u (x = 1 - u²), which spreads out the
/// region near x = 1 where x^t concentrates; functions that lose accuracy
/// near x = 1 (such as sqrt(1 - x²)) can read u directly.
struct RadialPoint {
    double x;
    double u;

    static RadialPoint from_x(double x) { return {x, std::sqrt(std::max(0.0, 1.0 - x))}; }
    static RadialPoint from_u(double u) { return {1.0 - u * u, u}; }

    /// 1 - x², accurate near x = 1.
    double one_minus_x2() const { return u * u * (2.0 - u * u); }
    /// x^t, accurate for large t.
    double pow(double t) const { return t == 0.0 ? 1.0 : std::exp(t * std::log1p(-u * u)); }
    /// x^t - 1, accurate when x^t is close to 1.
    double pow_minus_one(double t) const { return t == 0.0 ? 0.0 : std::expm1(t * std::log1p(-u * u)); }
};

/// (β+1)(1-x²)^β · 2x dx on [0,1], β > -1. β = 0 is normalized area measure.
struct BetaWeight {
    double beta = 0.0;
};

/// A user-supplied density on [0,1], normalized on construction.
///
/// The measure is assumed to satisfy 1 ∈ supp(μ) and μ({1}) = 0; neither
/// is checked.
struct QuadratureDefined {
    std::function<double(double)> density;
    /// Interior points where the density is not smooth (table nodes).
    std::vector<double> breakpoints;
    std::string label;
};

/// Relative cancellation |a|/|a-b| past which differences of moment ratios
/// are recomputed as centered integrals.
inline constexpr double kCompensationThreshold = 1e6;

/// Quadrature settings for centered (covariance) integrands, whose values
/// carry roundoff noise of order ε relative to their O(1) ingredients.
inline quadrature::Options compensated_options(quadrature::Options base) {
    base.abs_tol = std::numeric_limits<double>::infinity();
    base.rel_tol = std::max(base.rel_tol, 1e-8);
    return base;
}

/// Radial probability measure μ on [0,1] with moment oracle γ_t = ∫ x^t dμ.
///
/// Copies share one moment cache; the cache is safe for concurrent use.
class RadialMeasure {
public:
    using Family = std::variant<BetaWeight, QuadratureDefined>;

    static RadialMeasure beta_weight(double beta) {
        if (!(beta > -1.0) || !std::isfinite(beta)) {
            throw DomainError("beta weight requires beta > -1");
        }
        return RadialMeasure(BetaWeight{beta}, {});
    }

    /// Densities evaluated in x lose relative accuracy near x = 1, so the
    /// default relative target is 1e-10 rather than the closed-form 1e-13.
    static RadialMeasure from_density(QuadratureDefined family, quadrature::Options opts = density_options()) {
        if (!family.density) {
            throw DomainError("density measure needs a density function");
        }
        return RadialMeasure(std::move(family), opts);
    }

    static quadrature::Options density_options() {
        quadrature::Options o;
        o.rel_tol = 1e-10;
        return o;
    }

    const Family& family() const { return state_->family; }

    std::optional<double> beta() const {
        if (const auto* b = std::get_if<BetaWeight>(&state_->family)) {
            return b->beta;
        }
        return std::nullopt;
    }

    std::string describe() const {
        if (const auto* b = std::get_if<BetaWeight>(&state_->family)) {
            std::ostringstream os;
            os << "beta:" << b->beta;
            return os.str();
        }
        return "density:" + std::get<QuadratureDefined>(state_->family).label;
    }

    /// dμ/du at x = 1 - u² (Jacobian 2u included).
    double weight(double u) const {
        const RadialPoint p = RadialPoint::from_u(u);
        if (const auto* b = std::get_if<BetaWeight>(&state_->family)) {
            const double one_minus = p.one_minus_x2();
            const double base = b->beta == 0.0 ? 1.0 : std::pow(one_minus, b->beta);
            return (b->beta + 1.0) * base * 2.0 * p.x * 2.0 * u;
        }
        const auto& q = std::get<QuadratureDefined>(state_->family);
        return state_->normalization * q.density(p.x) * 2.0 * u;
    }

    /// ∫ f(p) x^t dμ(x) by adaptive quadrature in u. `extra_breaks` are x
    /// locations where f is not smooth.
    template <class F>
    std::complex<double> integrate(F&& f, double t, std::span<const double> extra_breaks = {}) const {
        return integrate_detailed(std::forward<F>(f), t, extra_breaks).value;
    }

    template <class F>
    quadrature::Result integrate_detailed(F&& f, double t, std::span<const double> extra_breaks = {},
                                          std::optional<quadrature::Options> opts = std::nullopt) const {
        if (!(t >= 0.0)) {
            throw DomainError("integration order must be nonnegative");
        }
        std::vector<double> breaks = u_breakpoints(t, extra_breaks);
        auto integrand = [&](double u) -> std::complex<double> {
            const RadialPoint p = RadialPoint::from_u(u);
            const double w = weight(u) * p.pow(t);
            if (w == 0.0) {
                return {0.0, 0.0};
            }
            return std::complex<double>(f(p)) * w;
        };
        return quadrature::integrate(integrand, breaks, opts.value_or(state_->quad));
    }

    /// γ_t = ∫ x^t dμ(x).
    double moment(double t) const {
        check_order(t);
        if (const auto* b = std::get_if<BetaWeight>(&state_->family)) {
            if (b->beta >= 0.0 && b->beta <= 30.0 && b->beta == std::floor(b->beta)) {
                // (β+1)! / (a (a+1) ... (a+β)), rounded once per factor
                const double a = 0.5 * t + 1.0;
                double g = 1.0;
                for (int j = 1; j <= static_cast<int>(b->beta) + 1; ++j) g *= j / (a + (j - 1));
                return g;
            }
            return std::exp(beta_log_moment(b->beta, t));
        }
        return cached_quadrature_moment(t);
    }

    double log_moment(double t) const {
        check_order(t);
        if (const auto* b = std::get_if<BetaWeight>(&state_->family)) {
            return beta_log_moment(b->beta, t);
        }
        return std::log(cached_quadrature_moment(t));
    }

    /// γ_t by direct quadrature of the density, for either family.
    double moment_by_quadrature(double t) const {
        check_order(t);
        return integrate([](const RadialPoint&) { return 1.0; }, t).real();
    }

    /// γ_{t+η}/γ_t.
    double moment_ratio(double t, double eta) const {
        check_order(t);
        check_order(eta);
        if (eta == 0.0) {
            return 1.0;
        }
        if (const auto* b = std::get_if<BetaWeight>(&state_->family)) {
            const double a = 0.5 * t + 1.0;
            const double bb = b->beta + 1.0;
            return std::exp(special::log_gamma_ratio(a, bb) - special::log_gamma_ratio(a + 0.5 * eta, bb));
        }
        const double num = moment(t + eta);
        const double den = moment(t);
        if (den == 0.0) {
            throw PrecisionError("moment underflow in ratio", 0.0, 0.0);
        }
        return num / den;
    }

    /// γ_{t+δ+η}/γ_{t+δ} - γ_{t+η}/γ_t without cancellation.
    ///
    /// Beta weights with δ an even integer use the exact product
    ///   f(a+m)/f(a) = Π_{j<m} (1 + σb / ((a+j)(a+j+σ+b))),
    /// a = t/2+1, σ = η/2, b = β+1, m = δ/2. Otherwise the difference is
    /// taken directly and, past kCompensationThreshold, recomputed as
    /// Cov_t(x^η, x^δ) / E_t[x^δ] under the probability x^t dμ / γ_t.
    double moment_ratio_difference(double t, double eta, double delta) const {
        check_order(t);
        check_order(eta);
        check_order(delta);
        if (eta == 0.0 || delta == 0.0) {
            return 0.0;
        }
        if (const auto* b = std::get_if<BetaWeight>(&state_->family)) {
            const double half = 0.5 * delta;
            if (half == std::floor(half) && half <= 1e6) {
                const double a = 0.5 * t + 1.0;
                const double sigma = 0.5 * eta;
                const double bb = b->beta + 1.0;
                double log_growth = 0.0;
                for (long j = 0; j < static_cast<long>(half); ++j) {
                    const double aj = a + static_cast<double>(j);
                    log_growth += std::log1p(sigma * bb / (aj * (aj + sigma + bb)));
                }
                return moment_ratio(t, eta) * std::expm1(log_growth);
            }
        }
        const double shifted = moment_ratio(t + delta, eta);
        const double base = moment_ratio(t, eta);
        const double diff = shifted - base;
        const double scale = std::max(std::abs(shifted), std::abs(base));
        if (scale <= kCompensationThreshold * std::abs(diff)) {
            return diff;
        }
        const double mean_delta = moment_ratio(t, delta);
        const double offset_eta = base - 1.0;
        const double offset_delta = mean_delta - 1.0;
        const double cov = integrate_detailed(
                               [&](const RadialPoint& p) {
                                   return (p.pow_minus_one(eta) - offset_eta) * (p.pow_minus_one(delta) - offset_delta);
                               },
                               t, {}, compensated_options(state_->quad))
                               .value.real() /
                           moment(t);
        return cov / mean_delta;
    }

    const quadrature::Options& quadrature_options() const { return state_->quad; }

    /// Breakpoints in u scaled to the width 1/sqrt(t+1) of the x^t peak.
    std::vector<double> u_breakpoints(double t, std::span<const double> extra_x) const {
        std::vector<double> breaks{0.0, 1.0};
        const double width = 1.0 / std::sqrt(t + 1.0);
        for (double w = width / 8.0; w < 1.0; w *= 2.0) {
            breaks.push_back(w);
        }
        // kinks where x^t < e^-80 cannot move the integral
        const double x_floor = t > 0.0 ? std::exp(-80.0 / t) : 0.0;
        const auto add_x = [&breaks, x_floor](double x) {
            if (x > x_floor && x < 1.0) {
                breaks.push_back(std::sqrt(1.0 - x));
            }
        };
        for (double x : extra_x) {
            add_x(x);
        }
        if (const auto* q = std::get_if<QuadratureDefined>(&state_->family)) {
            for (double x : q->breakpoints) {
                add_x(x);
            }
        }
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        return breaks;
    }

private:
    struct State {
        Family family;
        quadrature::Options quad;
        double normalization = 1.0;
        mutable std::shared_mutex cache_mutex;
        mutable std::unordered_map<double, double> cache;
    };

    RadialMeasure(Family family, quadrature::Options opts) {
        auto st = std::make_shared<State>();
        st->family = std::move(family);
        st->quad = opts;
        state_ = st;
        if (std::holds_alternative<QuadratureDefined>(st->family)) {
            const double mass = moment_by_quadrature(0.0);
            if (!(mass > 0.0) || !std::isfinite(mass)) {
                throw DomainError("density must have positive finite mass");
            }
            st->normalization = 1.0 / mass;
        }
    }

    static void check_order(double t) {
        if (!(t >= 0.0) || !std::isfinite(t)) {
            throw DomainError("moment order must be finite and nonnegative");
        }
    }

    // γ_t = (β+1) B(t/2+1, β+1) = Γ(β+2) Γ(a) / Γ(a+β+1), a = t/2+1.
    static double beta_log_moment(double beta, double t) {
        const double b = beta + 1.0;
        return std::lgamma(b + 1.0) - special::log_gamma_ratio(0.5 * t + 1.0, b);
    }

    double cached_quadrature_moment(double t) const {
        {
            std::shared_lock lock(state_->cache_mutex);
            if (auto it = state_->cache.find(t); it != state_->cache.end()) {
                return it->second;
            }
        }
        const double value = moment_by_quadrature(t);
        std::unique_lock lock(state_->cache_mutex);
        state_->cache.emplace(t, value);
        return value;
    }

    std::shared_ptr<const State> state_;
};

}  // namespace hypojac
