#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <vector>

#include "hypojac/errors.hpp"
#include "hypojac/measures.hpp"
#include "hypojac/parallel.hpp"
#include "hypojac/symbols.hpp"

namespace hypojac {

/// Hermitian band matrix with zero diagonal and nonzero diagonals ±n:
/// J_{k+n,k} = b_k, J_{k,k+n} = conj(b_k).
///
/// Indices split by residue mod n into n independent tridiagonal chains;
/// chain r has off-diagonals |b_r|, |b_{r+n}|, ... (conjugation by a
/// diagonal unitary removes the phases without changing the spectrum).
struct BandedJ {
    int n = 1;
    std::vector<complex> entries;
    std::vector<std::vector<double>> chains;

    std::size_t size() const { return entries.size(); }

    /// Dense row-major N×N principal truncation, N = size() + n.
    std::vector<complex> dense() const {
        const std::size_t dim = entries.size() + static_cast<std::size_t>(n);
        std::vector<complex> m(dim * dim, 0.0);
        for (std::size_t k = 0; k < entries.size(); ++k) {
            m[(k + n) * dim + k] = entries[k];
            m[k * dim + (k + n)] = std::conj(entries[k]);
        }
        return m;
    }
};

/// T = T_{z^n} and D = T_{q(|z|)} on A²_ν in the basis e_k = γ_{2k}^{-1/2} z^k.
///
/// With d_k the diagonal of [T*,T] and c_k the coefficient of
/// [T, D*] e_k = c_k e_{k+n}, the operator
///   J = [T*,T]^{-1/2} ([T*,D] + [D*,T]) [T*,T]^{-1/2}
/// has J_{k+n,k} = b_k = -c_k / sqrt(d_k d_{k+n}) = -λ_k / 2.
///
/// Entries are cached; copies of a model share the cache.
class ShiftDiagonalModel {
public:
    ShiftDiagonalModel(int n, RadialMeasure mu, RadialSymbol q)
        : n_(n), mu_(std::move(mu)), q_(std::move(q)), cache_(std::make_shared<Cache>()) {
        if (n < 1) {
            throw DomainError("shift multiplicity must be positive");
        }
    }

    int n() const { return n_; }
    const RadialMeasure& measure() const { return mu_; }
    const RadialSymbol& symbol() const { return q_; }

    /// d_k = γ_{2k+2n}/γ_{2k} - [k ≥ n] γ_{2k}/γ_{2k-2n}.
    double commutator_diag(std::size_t k) const {
        const double kk = static_cast<double>(k);
        const double two_n = 2.0 * n_;
        double d = 0.0;
        if (k < static_cast<std::size_t>(n_)) {
            d = mu_.moment_ratio(2.0 * kk, two_n);
        } else {
            d = mu_.moment_ratio_difference(2.0 * kk - two_n, two_n, two_n);
        }
        if (!(d > 1e-300)) {
            throw DegeneracyError("self-commutator of the shift is not positive", k, d);
        }
        return d;
    }

    /// c_k = sqrt(γ_{2k+2n}/γ_{2k}) (ĥ(2k)/γ_{2k} - ĥ(2k+2n)/γ_{2k+2n}).
    complex shift_coeff(std::size_t k) const {
        const double t = 2.0 * static_cast<double>(k);
        return std::sqrt(mu_.moment_ratio(t, 2.0 * n_)) * hhat_ratio_difference(q_, t, 2.0 * n_, mu_);
    }

    /// λ_k with A e_k = λ_k e_{k+n}, A = 2[T*,T]^{-1/2}[T,D*][T*,T]^{-1/2}.
    complex lambda_entry(std::size_t k) const {
        return 2.0 * shift_coeff(k) / std::sqrt(commutator_diag(k) * commutator_diag(k + n_));
    }

    /// b_k = J_{k+n,k}.
    complex j_entry(std::size_t k) const {
        const complex b = -0.5 * lambda_entry(k);
        return {b.real() + 0.0, b.imag() + 0.0};  // no signed zeros in reports
    }

    /// b_0 .. b_{count-1} plus the chain decomposition.
    BandedJ j_entries(std::size_t count) const {
        if (count < 1) {
            throw DomainError("j_entries needs at least one entry");
        }
        std::vector<complex> prefix;
        {
            std::lock_guard lock(cache_->mutex);
            const std::size_t have = cache_->entries.size();
            if (have < count) {
                cache_->entries.resize(count);
                try {
                    parallel_for(have, count, [&](std::size_t k) { cache_->entries[k] = j_entry(k); }, 4096);
                } catch (...) {
                    cache_->entries.resize(have);
                    throw;
                }
            }
            prefix.assign(cache_->entries.begin(), cache_->entries.begin() + static_cast<std::ptrdiff_t>(count));
        }
        BandedJ j;
        j.n = n_;
        j.entries = std::move(prefix);
        j.chains.assign(static_cast<std::size_t>(n_), {});
        for (std::size_t k = 0; k < count; ++k) {
            j.chains[k % static_cast<std::size_t>(n_)].push_back(std::abs(j.entries[k]));
        }
        return j;
    }

private:
    struct Cache {
        std::mutex mutex;
        std::vector<complex> entries;
    };

    int n_;
    RadialMeasure mu_;
    RadialSymbol q_;
    std::shared_ptr<Cache> cache_;
};

/// J_{n+k,k} for area measure and q = t^s, from the explicit closed form.
/// Independent of the moment pipeline; used as a cross-check.
inline double closed_form_entry(int n, double s, std::size_t k) {
    const double kk = static_cast<double>(k);
    const double nn = static_cast<double>(n);
    const double root = std::sqrt((kk + nn + 1.0) * (kk + 2.0 * nn + 1.0));
    const double denom = (kk + 1.0 + 0.5 * s) * (kk + nn + 1.0 + 0.5 * s);
    if (k < static_cast<std::size_t>(n)) {
        return s * root / (2.0 * denom);
    }
    return s * (kk + 1.0) * root / (2.0 * nn * denom);
}

}  // namespace hypojac
