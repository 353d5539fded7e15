#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "hypojac/errors.hpp"
#include "hypojac/model.hpp"
#include "hypojac/spectral.hpp"

namespace hypojac {

enum class Verdict { Hyponormal, NotHyponormal, Undetermined };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Hyponormal: return "Hyponormal";
        case Verdict::NotHyponormal: return "NotHyponormal";
        case Verdict::Undetermined: return "Undetermined";
    }
    return "unknown";
}

/// T_{z^n} + c T_{q(|z|)} is hyponormal for |c| ≤ threshold_lower and not
/// hyponormal for |c| > threshold_upper.
struct HypoVerdict {
    double threshold_lower = 0.0;
    double threshold_upper = std::numeric_limits<double>::infinity();
    BracketStatus status = BracketStatus::Certified;
    NormBracket bracket;
    double essential_lower = 0.0;
    int n = 1;
    std::string measure;
    std::string symbol;
};

namespace detail {

inline double reciprocal(double x) {
    if (x == 0.0) return std::numeric_limits<double>::infinity();
    if (std::isinf(x)) return 0.0;
    return 1.0 / x;
}

}  // namespace detail

/// Inverts the norm bracket. An unbounded J (q'(1) infinite, lower bound
/// still growing) admits only c = 0.
inline HypoVerdict threshold(const ShiftDiagonalModel& model, const BracketOptions& opts = {}) {
    HypoVerdict v;
    v.bracket = norm_bracket(model, opts);
    v.status = v.bracket.status;
    v.essential_lower = essential_lower_bound(model);
    v.n = model.n();
    v.measure = model.measure().describe();
    v.symbol = model.symbol().describe();
    if (v.status == BracketStatus::Diverging) {
        v.threshold_lower = 0.0;
        v.threshold_upper = 0.0;
    } else {
        v.threshold_lower = detail::reciprocal(v.bracket.upper);
        v.threshold_upper = detail::reciprocal(v.bracket.lower);
    }
    return v;
}

/// The verdict depends on |c| only. Exact boundary values inside the
/// bracket stay Undetermined.
inline Verdict classify(const HypoVerdict& v, complex c) {
    const double r = std::abs(c);
    if (r <= v.threshold_lower) return Verdict::Hyponormal;
    if (r > v.threshold_upper) return Verdict::NotHyponormal;
    return Verdict::Undetermined;
}

inline Verdict classify(const ShiftDiagonalModel& model, complex c, const BracketOptions& opts = {}) {
    if (c == 0.0) {
        return Verdict::Hyponormal;
    }
    return classify(threshold(model, opts), c);
}

/// Hermitian matrix with a real diagonal and one complex band at offset n;
/// band[k] is the (k+n, k) entry.
struct BandedHermitian {
    int n = 1;
    std::vector<double> diag;
    std::vector<complex> band;

    std::size_t size() const { return diag.size(); }

    std::vector<complex> dense() const {
        const std::size_t dim = diag.size();
        std::vector<complex> m(dim * dim, 0.0);
        for (std::size_t k = 0; k < dim; ++k) m[k * dim + k] = diag[k];
        for (std::size_t k = 0; k < band.size(); ++k) {
            m[(k + n) * dim + k] = band[k];
            m[k * dim + k + n] = std::conj(band[k]);
        }
        return m;
    }
};

/// Principal N×N truncation of [V*,V] for V = T + cD:
///   [V*,V] = [T*,T] - c [T,D*]* - c̄ [T,D*],
/// so the diagonal is d_k and the (k+n,k) entry is -c̄ c_k.
inline BandedHermitian selfcommutator_truncation(const ShiftDiagonalModel& model, complex c, std::size_t dim) {
    const auto n = static_cast<std::size_t>(model.n());
    if (dim < n + 1) {
        throw DomainError("self-commutator truncation needs N >= n + 1");
    }
    BandedHermitian s;
    s.n = model.n();
    s.diag.resize(dim);
    s.band.assign(dim - n, 0.0);
    parallel_for(0, dim, [&](std::size_t k) { s.diag[k] = model.commutator_diag(k); }, 1024);
    if (c != 0.0) {
        parallel_for(0, dim - n, [&](std::size_t k) { s.band[k] = -std::conj(c) * model.shift_coeff(k); }, 1024);
    }
    return s;
}

/// Smallest eigenvalue via LAPACK: dense zheevr up to dense_limit, banded
/// zhbevx beyond.
inline double min_eigenvalue(const BandedHermitian& s, std::size_t dense_limit = 2000) {
    const auto dim = static_cast<lapack_int>(s.size());
    if (dim == 0) {
        throw DomainError("empty matrix");
    }
    lapack_int found = 0;
    double w = 0.0;
    const double abstol = 2.0 * LAPACKE_dlamch('S');
    lapack_int info = 0;
    if (s.size() <= dense_limit) {
        std::vector<complex> a = s.dense();  // row-major Hermitian == column-major conjugate; eigenvalues agree
        std::vector<complex> z(1);
        std::vector<lapack_int> isuppz(2);
        info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'N', 'I', 'U', dim, a.data(), dim, 0.0, 0.0, 1, 1, abstol, &found,
                              &w, z.data(), 1, isuppz.data());
    } else {
        const lapack_int kd = s.n;
        const lapack_int ldab = kd + 1;
        std::vector<complex> ab(static_cast<std::size_t>(ldab) * s.size(), 0.0);
        for (std::size_t j = 0; j < s.size(); ++j) {
            ab[kd + j * ldab] = s.diag[j];
        }
        // upper band: A(i, j), i = j - n, holds conj(band[i]).
        for (std::size_t i = 0; i < s.band.size(); ++i) {
            const std::size_t j = i + static_cast<std::size_t>(s.n);
            ab[(kd + i - j) + j * ldab] = std::conj(s.band[i]);
        }
        std::vector<complex> q(1);
        std::vector<complex> z(1);
        std::vector<lapack_int> ifail(s.size());
        info = LAPACKE_zhbevx(LAPACK_COL_MAJOR, 'N', 'I', 'U', dim, kd, ab.data(), ldab, q.data(), 1, 0.0, 0.0, 1, 1,
                              abstol, &found, &w, z.data(), 1, ifail.data());
    }
    if (info != 0 || found != 1) {
        throw PrecisionError("LAPACK eigensolver failed (info " + std::to_string(info) + ")", w, 0.0);
    }
    return w;
}

enum class CertificateKind { Confirmed, Refuted, Inconclusive };

inline std::string_view to_string(CertificateKind k) {
    switch (k) {
        case CertificateKind::Confirmed: return "Confirmed";
        case CertificateKind::Refuted: return "Refuted";
        case CertificateKind::Inconclusive: return "Inconclusive";
    }
    return "unknown";
}

struct CertificateOptions {
    std::size_t n_start = 64;
    std::size_t n_max = 10000;
    /// Eigenvalues below -negative_tol count as refutations.
    double negative_tol = 1e-10;
    std::size_t dense_limit = 2000;
    BracketOptions bracket;
};

struct Certificate {
    CertificateKind kind = CertificateKind::Inconclusive;
    Verdict verdict = Verdict::Undetermined;
    std::size_t trunc = 0;
    double min_eigenvalue = 0.0;
    std::vector<std::pair<std::size_t, double>> history;
};

/// Brute-force check of a classification on truncations of [V*,V].
///
/// Principal truncations of a positive operator are positive, so a negative
/// eigenvalue refutes hyponormality outright. Absent one, the run is
/// Confirmed when classify says Hyponormal and Inconclusive otherwise.
inline Certificate verify_certificate(const ShiftDiagonalModel& model, complex c, const CertificateOptions& opts = {}) {
    Certificate cert;
    cert.verdict = classify(model, c, opts.bracket);
    const auto n = static_cast<std::size_t>(model.n());
    std::size_t dim = std::max(opts.n_start, n + 1);
    dim = std::min(dim, std::max(opts.n_max, n + 1));
    while (true) {
        const double eig = min_eigenvalue(selfcommutator_truncation(model, c, dim), opts.dense_limit);
        cert.history.emplace_back(dim, eig);
        cert.trunc = dim;
        cert.min_eigenvalue = eig;
        if (eig < -opts.negative_tol) {
            cert.kind = CertificateKind::Refuted;
            return cert;
        }
        if (dim >= opts.n_max) {
            break;
        }
        dim = std::min(2 * dim, opts.n_max);
    }
    cert.kind = cert.verdict == Verdict::Hyponormal ? CertificateKind::Confirmed : CertificateKind::Inconclusive;
    return cert;
}

}  // namespace hypojac
