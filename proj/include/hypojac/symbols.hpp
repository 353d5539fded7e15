#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "hypojac/errors.hpp"
#include "hypojac/measures.hpp"

namespace hypojac {

using complex = std::complex<double>;

/// q'(1): finite (with value) or infinite.
class DerivStatus {
public:
    static DerivStatus finite(complex value) { return DerivStatus(value); }
    static DerivStatus infinite() { return DerivStatus(); }

    bool is_finite() const { return value_.has_value(); }
    complex value() const {
        if (!value_) {
            throw DomainError("derivative at 1 is infinite");
        }
        return *value_;
    }

    friend bool operator==(const DerivStatus&, const DerivStatus&) = default;

private:
    DerivStatus() = default;
    explicit DerivStatus(complex v) : value_(v) {}
    std::optional<complex> value_;
};

/// q(t) = t^s, s > 0.
struct Power {
    double s;
};

/// q(t) = Σ c_j t^j.
struct Poly {
    std::vector<complex> coeffs;
};

/// q(t) = sqrt(1 - t²); q'(1⁻) = -∞.
struct SqrtDeficit {};

/// q given pointwise with an explicitly supplied derivative status at 1.
struct Tabulated {
    std::function<complex(double)> eval;
    DerivStatus deriv_at_one = DerivStatus::infinite();
    /// Interior x locations where eval is not smooth.
    std::vector<double> breakpoints;
    /// True when deriv_at_one came from a finite-difference estimate.
    bool heuristic_derivative = false;
    std::string label;
};

/// Radial symbol q on [0,1]. Immutable; safe to share across threads.
class RadialSymbol {
public:
    using Family = std::variant<Power, Poly, SqrtDeficit, Tabulated>;

    static RadialSymbol power(double s) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw DomainError("power symbol requires s > 0");
        }
        return RadialSymbol(Power{s});
    }

    static RadialSymbol poly(std::vector<complex> coeffs) {
        if (coeffs.empty()) {
            throw DomainError("poly symbol needs at least one coefficient");
        }
        return RadialSymbol(Poly{std::move(coeffs)});
    }

    static RadialSymbol sqrt_deficit() { return RadialSymbol(SqrtDeficit{}); }

    static RadialSymbol tabulated(Tabulated table) {
        if (!table.eval) {
            throw DomainError("tabulated symbol needs an evaluator");
        }
        for (int i = 0; i <= 1000; ++i) {
            const complex v = table.eval(i / 1000.0);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw DomainError("tabulated symbol is not bounded on [0,1]");
            }
        }
        return RadialSymbol(std::move(table));
    }

    const Family& family() const { return family_; }

    complex operator()(double x) const { return eval(RadialPoint::from_x(x)); }

    complex eval(const RadialPoint& p) const {
        return std::visit(
            [&p](const auto& f) -> complex {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, Power>) {
                    return p.x <= 0.0 ? 0.0 : std::pow(p.x, f.s);
                } else if constexpr (std::is_same_v<T, Poly>) {
                    complex acc = 0.0;
                    for (std::size_t j = f.coeffs.size(); j-- > 0;) {
                        acc = acc * p.x + f.coeffs[j];
                    }
                    return acc;
                } else if constexpr (std::is_same_v<T, SqrtDeficit>) {
                    return std::sqrt(p.one_minus_x2());
                } else {
                    return f.eval(p.x);
                }
            },
            family_);
    }

    DerivStatus deriv_at_one() const {
        return std::visit(
            [](const auto& f) -> DerivStatus {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, Power>) {
                    return DerivStatus::finite(f.s);
                } else if constexpr (std::is_same_v<T, Poly>) {
                    complex d = 0.0;
                    for (std::size_t j = 1; j < f.coeffs.size(); ++j) {
                        d += static_cast<double>(j) * f.coeffs[j];
                    }
                    return DerivStatus::finite(d);
                } else if constexpr (std::is_same_v<T, SqrtDeficit>) {
                    return DerivStatus::infinite();
                } else {
                    return f.deriv_at_one;
                }
            },
            family_);
    }

    bool heuristic() const {
        const auto* t = std::get_if<Tabulated>(&family_);
        return t != nullptr && t->heuristic_derivative;
    }

    /// True when every ĥ(m) is a combination of moments of μ.
    bool moment_expressible() const {
        return std::holds_alternative<Power>(family_) || std::holds_alternative<Poly>(family_);
    }

    std::vector<double> breakpoints() const {
        if (const auto* t = std::get_if<Tabulated>(&family_)) {
            return t->breakpoints;
        }
        return {};
    }

    /// max |q| on a 1001-point grid (exact for Power and SqrtDeficit).
    double sup_norm() const {
        if (std::holds_alternative<Power>(family_) || std::holds_alternative<SqrtDeficit>(family_)) {
            return 1.0;
        }
        double best = 0.0;
        for (int i = 0; i <= 1000; ++i) {
            best = std::max(best, std::abs((*this)(i / 1000.0)));
        }
        return best;
    }

    std::string describe() const {
        std::ostringstream os;
        std::visit(
            [&os](const auto& f) {
                using T = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<T, Power>) {
                    os << "power:" << f.s;
                } else if constexpr (std::is_same_v<T, Poly>) {
                    os << "poly:";
                    for (std::size_t j = 0; j < f.coeffs.size(); ++j) {
                        if (j) os << ',';
                        os << f.coeffs[j].real();
                        if (f.coeffs[j].imag() != 0.0) {
                            os << (f.coeffs[j].imag() < 0 ? "" : "+") << f.coeffs[j].imag() << 'i';
                        }
                    }
                } else if constexpr (std::is_same_v<T, SqrtDeficit>) {
                    os << "sqrtdef";
                } else {
                    os << "table:" << f.label;
                }
            },
            family_);
        return os.str();
    }

private:
    explicit RadialSymbol(Family f) : family_(std::move(f)) {}
    Family family_;
};

/// ĥ(m) = ∫ conj(q(x)) x^m dμ(x).
///
/// Power and Poly symbols are evaluated through the moment oracle
/// (ĥ(m) = γ_{m+s} for q = t^s); the rest by quadrature.
inline complex hhat(const RadialSymbol& q, double m, const RadialMeasure& mu) {
    if (!(m >= 0.0)) {
        throw DomainError("hhat order must be nonnegative");
    }
    if (const auto* p = std::get_if<Power>(&q.family())) {
        return mu.moment(m + p->s);
    }
    if (const auto* p = std::get_if<Poly>(&q.family())) {
        complex acc = 0.0;
        for (std::size_t j = 0; j < p->coeffs.size(); ++j) {
            if (p->coeffs[j] != 0.0) {
                acc += std::conj(p->coeffs[j]) * mu.moment(m + static_cast<double>(j));
            }
        }
        return acc;
    }
    const auto breaks = q.breakpoints();
    return mu.integrate([&q](const RadialPoint& p) { return std::conj(q.eval(p)); }, m, breaks);
}

/// α = q'(1) / (2n).
inline DerivStatus alpha(const RadialSymbol& q, int n) {
    if (n < 1) {
        throw DomainError("shift multiplicity must be positive");
    }
    const DerivStatus d = q.deriv_at_one();
    if (!d.is_finite()) {
        return d;
    }
    return DerivStatus::finite(d.value() / (2.0 * n));
}

/// ĥ(t)/γ_t - ĥ(t+δ)/γ_{t+δ}.
///
/// Both terms tend to q(1) as t grows, so the difference is routed through
/// moment_ratio_difference for moment-expressible symbols and otherwise
/// recomputed as -Cov_t(h, x^δ) / E_t[x^δ] once the relative cancellation
/// passes kCompensationThreshold.
inline complex hhat_ratio_difference(const RadialSymbol& q, double t, double delta, const RadialMeasure& mu) {
    if (const auto* p = std::get_if<Power>(&q.family())) {
        return -mu.moment_ratio_difference(t, p->s, delta);
    }
    if (const auto* p = std::get_if<Poly>(&q.family())) {
        complex acc = 0.0;
        for (std::size_t j = 1; j < p->coeffs.size(); ++j) {
            if (p->coeffs[j] != 0.0) {
                acc -= std::conj(p->coeffs[j]) * mu.moment_ratio_difference(t, static_cast<double>(j), delta);
            }
        }
        return acc;
    }
    const complex mean_here = hhat(q, t, mu) / mu.moment(t);
    const complex mean_shifted = hhat(q, t + delta, mu) / mu.moment(t + delta);
    const complex diff = mean_here - mean_shifted;
    const double scale = std::max(std::abs(mean_here), std::abs(mean_shifted));
    if (scale <= kCompensationThreshold * std::abs(diff)) {
        return diff;
    }
    const double mean_delta = mu.moment_ratio(t, delta);
    const auto breaks = q.breakpoints();
    const double offset_delta = mean_delta - 1.0;
    const complex cov =
        mu.integrate_detailed(
              [&](const RadialPoint& p) {
                  return (std::conj(q.eval(p)) - mean_here) * (p.pow_minus_one(delta) - offset_delta);
              },
              t, breaks, compensated_options(mu.quadrature_options()))
            .value /
        mu.moment(t);
    return -cov / mean_delta;
}

/// One-sided three-point estimate of q'(1). Heuristic; opt-in only.
inline complex three_point_derivative_at_one(const std::function<complex(double)>& eval, double h = 1e-3) {
    return (3.0 * eval(1.0) - 4.0 * eval(1.0 - h) + eval(1.0 - 2.0 * h)) / (2.0 * h);
}

}  // namespace hypojac
