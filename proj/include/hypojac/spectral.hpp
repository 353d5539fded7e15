#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hypojac/errors.hpp"
#include "hypojac/model.hpp"
#include "hypojac/parallel.hpp"

namespace hypojac {

namespace detail {

// Number of eigenvalues below x of the zero-diagonal tridiagonal matrix with
// squared off-diagonals e2 (LDLᵀ inertia of J - xI).
inline std::size_t sturm_count(std::span<const double> e2, std::size_t dim, double x, double pivmin) {
    std::size_t count = 0;
    double q = -x;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < dim; ++i) {
        q = -x - e2[i - 1] / q;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

}  // namespace detail

/// Largest eigenvalue of the dim×dim zero-diagonal tridiagonal matrix with
/// off-diagonals offdiag[0..dim-2]. The spectrum is symmetric about 0, so
/// this is also the operator norm of the truncation.
///
/// Bisection runs until the bracket cannot be split further in double
/// precision, well below the 1e-12 absolute target.
inline double chain_top_eigenvalue(std::span<const double> offdiag, std::size_t dim) {
    if (dim == 0) {
        throw DomainError("chain truncation must be nonempty");
    }
    if (dim == 1) {
        return 0.0;
    }
    if (offdiag.size() < dim - 1) {
        throw DomainError("not enough off-diagonal entries for the requested truncation");
    }
    std::vector<double> e2(dim - 1);
    double gershgorin = 0.0;
    double max_e2 = 0.0;
    for (std::size_t i = 0; i + 1 < dim; ++i) {
        const double b = std::abs(offdiag[i]);
        if (!std::isfinite(b)) {
            throw DomainError("non-finite chain entry");
        }
        e2[i] = b * b;
        max_e2 = std::max(max_e2, e2[i]);
        const double prev = i == 0 ? 0.0 : std::abs(offdiag[i - 1]);
        gershgorin = std::max(gershgorin, prev + b);
    }
    gershgorin = std::max(gershgorin, std::abs(offdiag[dim - 2]));
    if (gershgorin == 0.0) {
        return 0.0;
    }
    const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, max_e2);
    double lo = 0.0;
    double hi = gershgorin;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) {
            break;
        }
        if (detail::sturm_count(e2, dim, mid, pivmin) == dim) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

enum class BracketStatus { Certified, Heuristic, Diverging };

inline std::string_view to_string(BracketStatus s) {
    switch (s) {
        case BracketStatus::Certified: return "certified";
        case BracketStatus::Heuristic: return "heuristic";
        case BracketStatus::Diverging: return "diverging";
    }
    return "unknown";
}

/// Interval enclosing ‖J‖.
struct NormBracket {
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    BracketStatus status = BracketStatus::Certified;
    std::size_t trunc_used = 0;
    std::vector<std::pair<std::size_t, double>> history;

    double width() const { return upper - lower; }
    bool contains(double x) const { return lower <= x && x <= upper; }
};

struct BracketOptions {
    /// Relative increment of the lower bound below which doubling stops.
    double tol = 1e-6;
    std::size_t n_max = std::size_t{1} << 20;
    std::size_t n_start = 256;
};

/// 2|α| = |q'(1)|/n: the norm of αL^n + ᾱR^n, hence of the essential part
/// of J. Infinite when q'(1) is.
inline double essential_lower_bound(const ShiftDiagonalModel& model) {
    const DerivStatus a = alpha(model.symbol(), model.n());
    if (!a.is_finite()) {
        return std::numeric_limits<double>::infinity();
    }
    return 2.0 * std::abs(a.value());
}

namespace detail {

struct TailBound {
    double sup = 0.0;
    bool certified = true;
};

// For area measure and q = t^s with s ≥ 2n every entry lies below s/(2n).
inline bool has_proven_entry_bound(const ShiftDiagonalModel& model) {
    const auto beta = model.measure().beta();
    const auto* p = std::get_if<Power>(&model.symbol().family());
    return beta && *beta == 0.0 && p != nullptr && p->s >= 2.0 * model.n();
}

// Entries of the last decade must move monotonically toward the limit.
inline TailBound monotone_tail(std::span<const double> chain, double limit) {
    TailBound tb;
    if (chain.empty()) {
        tb.sup = limit;
        return tb;
    }
    const double last = chain.back();
    const std::size_t start = chain.size() / 10;
    bool nondecreasing = true;
    bool nonincreasing = true;
    double window_max = 0.0;
    for (std::size_t i = start; i < chain.size(); ++i) {
        window_max = std::max(window_max, chain[i]);
        if (i > start) {
            if (chain[i] < chain[i - 1]) nondecreasing = false;
            if (chain[i] > chain[i - 1]) nonincreasing = false;
        }
    }
    const bool toward = (nondecreasing && last <= limit) || (nonincreasing && last >= limit);
    if (toward) {
        tb.sup = std::max(last, limit);
    } else {
        tb.sup = std::max({window_max, last, limit});
        tb.certified = false;
    }
    return tb;
}

// Gershgorin row sums of the infinite chain: computed rows, the boundary row,
// and the tail where every entry is at most tail_sup.
inline double chain_gershgorin(std::span<const double> chain, double tail_sup) {
    double best = 2.0 * tail_sup;
    double prev = 0.0;
    for (double b : chain) {
        best = std::max(best, prev + b);
        prev = b;
    }
    return std::max(best, prev + tail_sup);
}

}  // namespace detail

/// Certified bracket for ‖J‖ by doubling the truncation.
///
/// lower is the largest top eigenvalue over the n chains at the final
/// truncation. upper is a Gershgorin bound on the infinite chains: the tail
/// uses the proven entry bound s/(2n) when it applies, otherwise monotone
/// convergence of |b_k| to |q'(1)|/(2n) over the last decade of computed
/// entries (Heuristic if the window is not monotone). With q'(1) infinite the
/// upper bound is +∞, and the status is Diverging if lower is still growing
/// at n_max.
inline NormBracket norm_bracket(const ShiftDiagonalModel& model, const BracketOptions& opts = {}) {
    if (!(opts.tol > 0.0) || opts.n_max < 1) {
        throw DomainError("norm_bracket needs tol > 0 and n_max >= 1");
    }
    const auto n = static_cast<std::size_t>(model.n());
    NormBracket out;
    std::size_t count = std::min(std::max<std::size_t>(opts.n_start, 1), opts.n_max);
    bool still_growing = true;
    BandedJ j;
    while (true) {
        j = model.j_entries(count);
        std::vector<double> tops(n, 0.0);
        parallel_for(0, n, [&](std::size_t r) {
            const auto& chain = j.chains[r];
            tops[r] = chain_top_eigenvalue(chain, chain.size() + 1);
        }, 1);
        const double lower = *std::max_element(tops.begin(), tops.end());
        const double previous = out.history.empty() ? -1.0 : out.history.back().second;
        out.history.emplace_back(count, lower);
        out.trunc_used = count;
        if (previous >= 0.0) {
            const double increment = lower - previous;
            if (increment <= opts.tol * std::max(lower, 1e-300)) {
                still_growing = false;
                break;
            }
        }
        if (count >= opts.n_max) {
            break;
        }
        count = std::min(2 * count, opts.n_max);
    }
    out.lower = out.history.back().second;

    const DerivStatus a = alpha(model.symbol(), model.n());
    if (!a.is_finite()) {
        out.upper = std::numeric_limits<double>::infinity();
        out.status = still_growing ? BracketStatus::Diverging : BracketStatus::Heuristic;
        return out;
    }
    const double limit = std::abs(a.value());
    const bool proven = detail::has_proven_entry_bound(model);
    bool certified = !model.symbol().heuristic();
    double upper = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const auto& chain = j.chains[r];
        detail::TailBound tail;
        if (proven) {
            tail.sup = std::get<Power>(model.symbol().family()).s / (2.0 * model.n());
        } else {
            tail = detail::monotone_tail(chain, limit);
        }
        certified = certified && tail.certified;
        upper = std::max(upper, detail::chain_gershgorin(chain, tail.sup));
    }
    out.upper = upper;
    out.status = certified ? BracketStatus::Certified : BracketStatus::Heuristic;
    return out;
}

}  // namespace hypojac
