#pragma once

// Eigenvalue/diagonal majorization and the eigenvalue bounds it yields for
// verifiers specified by a basis of well-separated acceptance probabilities.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "fqma/linalg.hpp"

namespace fqma {

struct MajorizationInput {
    std::vector<double> eigenvalues;  // descending
    std::vector<double> diagonal;     // descending

    MajorizationInput(std::vector<double> eigs, std::vector<double> diag)
        : eigenvalues(std::move(eigs)), diagonal(std::move(diag)) {
        if (eigenvalues.size() != diagonal.size())
            throw std::invalid_argument("MajorizationInput: sequences must have equal length");
        if (!std::is_sorted(eigenvalues.begin(), eigenvalues.end(), std::greater<>{}) ||
            !std::is_sorted(diagonal.begin(), diagonal.end(), std::greater<>{}))
            throw std::invalid_argument("MajorizationInput: sequences must be sorted descending");
    }

    /// Eigenvalues and sorted diagonal of a Hermitian matrix.
    static MajorizationInput from_hermitian(const Matrix& h) {
        std::vector<double> diag(h.rows());
        for (std::size_t i = 0; i < h.rows(); ++i) diag[i] = h(i, i).real();
        std::sort(diag.begin(), diag.end(), std::greater<>{});
        return {eigvalsh(h), std::move(diag)};
    }
};

struct MajorizationResult {
    bool ok;
    std::vector<double> partial_slacks;  // s_t = Σ_{i<=t} (λ_i − μ_i)
};

/// ok iff every partial slack >= -tol and the total slack is within tol of 0.
inline MajorizationResult check_majorization(const MajorizationInput& in, double tol = kDerivedTol) {
    MajorizationResult res{true, {}};
    res.partial_slacks.reserve(in.eigenvalues.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < in.eigenvalues.size(); ++i) {
        acc += in.eigenvalues[i] - in.diagonal[i];
        res.partial_slacks.push_back(acc);
        if (acc < -tol) res.ok = false;
    }
    if (!res.partial_slacks.empty() && std::abs(res.partial_slacks.back()) > tol) res.ok = false;
    return res;
}

struct VectorBoundsResult {
    bool shape_ok;
    std::string shape_error;  // empty when shape_ok
    double lower_lambda_d;    // lower bound on the d-th eigenvalue
    double upper_lambda_d1;   // upper bound on the (d+1)-th eigenvalue
    bool certified;           // lower >= 2/3 and upper <= 1/3
};

/// μ: sorted diagonal values in a basis where the first d acceptance
/// probabilities are >= 1 - 1/(3q) and the rest are <= 1/(3·2^k).
/// Majorization gives λ_d >= Σ_{i<=d} μ_i - (d-1) and λ_{d+1} <= Σ_{i>d} μ_i.
inline VectorBoundsResult vfqma_bounds(std::span<const double> mu, std::size_t d, std::size_t q, std::size_t k) {
    VectorBoundsResult res{true, {}, 0.0, 0.0, false};
    const std::size_t n = std::size_t{1} << k;
    auto fail = [&](std::string why) {
        res.shape_ok = false;
        res.shape_error = std::move(why);
        return res;
    };
    if (q < 1 || q > n) return fail("q must satisfy 1 <= q <= 2^k");
    if (d < 1 || d > q) return fail("d must satisfy 1 <= d <= q");
    if (mu.size() != n) return fail("expected 2^k diagonal values");
    if (!std::is_sorted(mu.begin(), mu.end(), std::greater<>{})) return fail("diagonal values must be sorted descending");
    const double hi = 1.0 - 1.0 / (3.0 * static_cast<double>(q));
    const double lo = 1.0 / (3.0 * static_cast<double>(n));
    for (std::size_t i = 0; i < d; ++i)
        if (mu[i] < hi) return fail("entry " + std::to_string(i) + " is below 1 - 1/(3q)");
    for (std::size_t i = d; i < n; ++i)
        if (mu[i] > lo) return fail("entry " + std::to_string(i) + " is above 1/(3*2^k)");

    double head = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < d; ++i) head += mu[i];
    for (std::size_t i = d; i < n; ++i) tail += mu[i];
    res.lower_lambda_d = head - static_cast<double>(d - 1);
    res.upper_lambda_d1 = tail;
    res.certified = res.lower_lambda_d >= 2.0 / 3.0 && res.upper_lambda_d1 <= 1.0 / 3.0;
    return res;
}

/// No-instance direction: λ_1 <= trace = Σ μ_i.
inline double vfqma_no_bound(std::span<const double> mu) {
    double s = 0.0;
    for (double x : mu) s += x;
    return s;
}

}  // namespace fqma
