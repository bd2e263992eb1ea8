#pragma once

// Verification procedures: a unitary V on k witness qubits followed by m
// auxiliary qubits (witness qubits most significant), accepting when the
// first qubit measures 1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fqma/linalg.hpp"
#include "fqma/random.hpp"
#include "fqma/subspace.hpp"

namespace fqma {

class VerifierSpec {
public:
    VerifierSpec(std::size_t k, std::size_t m, Matrix v) : k_(k), m_(m), v_(std::move(v)) {
        if (k_ < 1) throw std::invalid_argument("VerifierSpec: k must be at least 1");
        if (k_ + m_ > 12) throw std::overflow_error("VerifierSpec: 2^(k+m) exceeds the 4096 ambient dimension cap");
        const std::size_t n = std::size_t{1} << (k_ + m_);
        if (v_.rows() != n || v_.cols() != n) throw std::invalid_argument("VerifierSpec: V must be 2^(k+m) square");
        if (!is_unitary(v_, kStructuralTol)) throw std::invalid_argument("VerifierSpec: V is not unitary");
    }

    static VerifierSpec identity(std::size_t k, std::size_t m) {
        if (k + m > 12) throw std::overflow_error("VerifierSpec: 2^(k+m) exceeds the 4096 ambient dimension cap");
        return VerifierSpec(k, m, Matrix::identity(std::size_t{1} << (k + m)));
    }

    std::size_t k() const noexcept { return k_; }
    std::size_t m() const noexcept { return m_; }
    const Matrix& unitary() const noexcept { return v_; }
    std::size_t witness_dim() const noexcept { return std::size_t{1} << k_; }
    std::size_t ancilla_dim() const noexcept { return std::size_t{1} << m_; }
    std::size_t total_dim() const noexcept { return std::size_t{1} << (k_ + m_); }

private:
    std::size_t k_;
    std::size_t m_;
    Matrix v_;
};

/// |1⟩⟨1| on the first qubit, identity elsewhere.
inline Matrix pi_acc(const VerifierSpec& v) {
    const std::size_t n = v.total_dim();
    Matrix p(n, n);
    for (std::size_t i = n / 2; i < n; ++i) p(i, i) = 1.0;
    return p;
}

/// Identity on the witness qubits, |0^m⟩⟨0^m| on the auxiliary qubits.
inline Matrix pi_init(const VerifierSpec& v) {
    const std::size_t n = v.total_dim();
    Matrix p(n, n);
    for (std::size_t w = 0; w < v.witness_dim(); ++w) p(w * v.ancilla_dim(), w * v.ancilla_dim()) = 1.0;
    return p;
}

/// Π_init V† Π_acc V Π_init.
inline Matrix pi_x(const VerifierSpec& v) {
    const Matrix init = pi_init(v);
    return init * v.unitary().adjoint() * pi_acc(v) * v.unitary() * init;
}

/// |ψ⟩ ⊗ |0^m⟩.
inline Vector embed_witness(const VerifierSpec& v, std::span<const cplx> psi) {
    if (psi.size() != v.witness_dim()) throw std::invalid_argument("embed_witness: witness dimension mismatch");
    Vector out(v.total_dim());
    for (std::size_t w = 0; w < psi.size(); ++w) out[w * v.ancilla_dim()] = psi[w];
    return out;
}

/// ‖Π_acc V (|ψ⟩ ⊗ |0^m⟩)‖², computed by running the circuit.
inline double acceptance_probability(const VerifierSpec& v, std::span<const cplx> psi) {
    const Vector out = v.unitary() * embed_witness(v, psi);
    double p = 0.0;
    for (std::size_t i = out.size() / 2; i < out.size(); ++i) p += std::norm(out[i]);
    return p;
}

/// Compression E of Π_x to the witness space: ⟨ψ|E|ψ⟩ = ‖Π_acc V (|ψ⟩⊗|0^m⟩)‖².
inline Matrix acceptance_operator(const VerifierSpec& v) {
    const std::size_t nw = v.witness_dim();
    const std::size_t na = v.ancilla_dim();
    const std::size_t n = v.total_dim();
    const Matrix& u = v.unitary();
    Matrix e(nw, nw);
    for (std::size_t i = 0; i < nw; ++i)
        for (std::size_t j = i; j < nw; ++j) {
            cplx acc{};
            for (std::size_t r = n / 2; r < n; ++r) acc += std::conj(u(r, i * na)) * u(r, j * na);
            e(i, j) = acc;
            e(j, i) = std::conj(acc);
        }
    return e;
}

// ---------------------------------------------------------------------------
// Spectral profiles

struct Thresholds {
    double c = 2.0 / 3.0;
    double w = 1.0 / 3.0;
    double s = 1.0 / 3.0;
    std::size_t q = 1;

    void validate() const {
        if (!(c > std::max(w, s))) throw std::invalid_argument("Thresholds: need c > max(w, s)");
        if (q < 1) throw std::invalid_argument("Thresholds: q must be at least 1");
        for (double x : {c, w, s})
            if (x < 0.0 || x > 1.0) throw std::invalid_argument("Thresholds: values must lie in [0, 1]");
    }

    /// (1 - 2^-r, 2^-r, 2^-r).
    static Thresholds amplified(std::size_t r, std::size_t q) {
        const double eps = std::ldexp(1.0, -static_cast<int>(r));
        return {1.0 - eps, eps, eps, q};
    }
};

struct SpectralProfile {
    std::vector<double> eigenvalues;  // descending, length 2^k
    Thresholds thresholds;

    SpectralProfile(std::vector<double> eigs, Thresholds th) : eigenvalues(std::move(eigs)), thresholds(th) {
        thresholds.validate();
        if (!std::is_sorted(eigenvalues.begin(), eigenvalues.end(), std::greater<>{}))
            throw std::invalid_argument("SpectralProfile: eigenvalues must be sorted descending");
        for (double x : eigenvalues)
            if (x < -kStructuralTol || x > 1.0 + kStructuralTol)
                throw std::invalid_argument("SpectralProfile: eigenvalue outside [0, 1]");
    }
};

enum class InstanceKind { yes, no };

inline const char* to_string(InstanceKind k) { return k == InstanceKind::yes ? "yes" : "no"; }

struct PlantedInstance {
    VerifierSpec spec;
    SubspaceBasis planted_basis;  // W_x; empty for no-instances
    InstanceKind kind;
    SpectralProfile profile;      // the requested spectrum of E
};

// ---------------------------------------------------------------------------
// Planting

namespace detail {

// V with E = Σ_i λ_i |v_i⟩⟨v_i| for a full orthonormal eigenbasis {v_i}.
// Direction v_i is sent to √λ_i |1⟩|a_i⟩ + √(1-λ_i) |0⟩|b_i⟩ with {a_i},
// {b_i} orthonormal families on the remaining k+m-1 qubits.
inline VerifierSpec plant_eigenbasis(std::size_t k, std::size_t m, const std::vector<Vector>& eigvecs,
                                     std::span<const double> lambdas, Rng& rng) {
    const std::size_t nw = std::size_t{1} << k;
    const std::size_t na = std::size_t{1} << m;
    const std::size_t n = nw * na;
    const std::size_t half = n / 2;
    if (eigvecs.size() != nw || lambdas.size() != nw)
        throw std::invalid_argument("plant_verifier: need 2^k eigenvectors and eigenvalues");
    // Tails: first nw columns of two random isometries into the half space.
    const SubspaceBasis tails_acc = random_subspace(rng, half, nw);
    const SubspaceBasis tails_rej = random_subspace(rng, half, nw);
    std::vector<Vector> images(nw, Vector(n));
    for (std::size_t i = 0; i < nw; ++i) {
        const double lambda = std::clamp(lambdas[i], 0.0, 1.0);
        const double a = std::sqrt(lambda);
        const double b = std::sqrt(1.0 - lambda);
        for (std::size_t r = 0; r < half; ++r) {
            images[i][half + r] = a * tails_acc[i][r];
            images[i][r] = b * tails_rej[i][r];
        }
    }

    std::vector<AssignedColumn> cols;
    cols.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        Vector col(n);
        for (std::size_t i = 0; i < nw; ++i) {
            const cplx coef = std::conj(eigvecs[i][w]);
            for (std::size_t r = 0; r < n; ++r) col[r] += coef * images[i][r];
        }
        cols.push_back({w * na, std::move(col)});
    }
    return VerifierSpec(k, m, complete_unitary(cols, n));
}

inline void check_plant_shape(std::size_t k, std::size_t m, std::span<const double> lambdas) {
    if (m < 1) throw std::invalid_argument("plant_verifier: needs at least one auxiliary qubit");
    if (k < 1 || k + m > 12) throw std::invalid_argument("plant_verifier: k, m out of range");
    for (double x : lambdas)
        if (x < -kStructuralTol || x > 1.0 + kStructuralTol)
            throw std::invalid_argument("plant_verifier: eigenvalue outside [0, 1]");
}

}  // namespace detail

/// Builds V so that E has eigenvectors `basis` (extended by a random
/// orthonormal basis of its complement) with the requested eigenvalues.
inline VerifierSpec plant_verifier(std::size_t k, std::size_t m, const SubspaceBasis& basis,
                                   std::span<const double> accepted_eigs, std::span<const double> background_eigs,
                                   std::uint64_t seed) {
    std::vector<double> lambdas(accepted_eigs.begin(), accepted_eigs.end());
    lambdas.insert(lambdas.end(), background_eigs.begin(), background_eigs.end());
    detail::check_plant_shape(k, m, lambdas);
    const std::size_t nw = std::size_t{1} << k;
    if (basis.ambient_dim() != nw) throw std::invalid_argument("plant_verifier: basis is not in the witness space");
    if (accepted_eigs.size() != basis.dim()) throw std::invalid_argument("plant_verifier: one eigenvalue per basis vector");
    if (lambdas.size() != nw) throw std::invalid_argument("plant_verifier: eigenvalue count must equal 2^k");
    basis.validate(kStructuralTol);

    Rng rng(seed, 0x91a7);
    std::vector<Vector> eigvecs = basis.vectors();
    const SubspaceBasis rest = orth_complement(basis);
    if (!rest.empty()) {
        const Matrix mix = random_unitary(rng, rest.dim());
        for (std::size_t j = 0; j < rest.dim(); ++j) {
            Vector v(nw);
            for (std::size_t i = 0; i < rest.dim(); ++i)
                for (std::size_t r = 0; r < nw; ++r) v[r] += mix(i, j) * rest[i][r];
            eigvecs.push_back(std::move(v));
        }
    }
    return detail::plant_eigenbasis(k, m, eigvecs, lambdas, rng);
}

/// Variant taking a full orthonormal eigenbasis of the witness space.
inline VerifierSpec plant_verifier(std::size_t k, std::size_t m, const EighResult& eigen, std::uint64_t seed) {
    detail::check_plant_shape(k, m, eigen.values);
    eigen.vectors.validate(kStructuralTol);
    Rng rng(seed, 0x91a7);
    return detail::plant_eigenbasis(k, m, eigen.vectors.vectors(), eigen.values, rng);
}

struct PlantParams {
    std::size_t k = 2;
    std::size_t m = 1;
    std::size_t d = 1;  // ignored for no-instances
    std::size_t q = 3;
    std::size_t r = 8;
};

/// Yes-instance: random d-dim W, accepted eigenvalues in [1 - 2^-r/2, 1],
/// background in [0, 2^-r/2].
inline PlantedInstance make_yes_instance(const PlantParams& p, std::uint64_t seed) {
    if (p.d < 1 || p.d > p.q) throw std::invalid_argument("make_yes_instance: need 1 <= d <= q");
    const std::size_t nw = std::size_t{1} << p.k;
    if (p.d > nw) throw std::invalid_argument("make_yes_instance: d exceeds witness dimension");
    const double eps = std::ldexp(1.0, -static_cast<int>(p.r));
    Rng rng(seed, 1);
    SubspaceBasis w = random_subspace(rng, nw, p.d);
    std::vector<double> acc(p.d), bg(nw - p.d);
    for (auto& x : acc) x = 1.0 - 0.5 * eps * rng.uniform();
    for (auto& x : bg) x = 0.5 * eps * rng.uniform();
    VerifierSpec spec = plant_verifier(p.k, p.m, w, acc, bg, seed);
    std::vector<double> all = acc;
    all.insert(all.end(), bg.begin(), bg.end());
    std::sort(all.begin(), all.end(), std::greater<>{});
    return {std::move(spec), std::move(w), InstanceKind::yes, SpectralProfile(all, Thresholds::amplified(p.r, p.q))};
}

/// No-instance: every eigenvalue in [0, 2^-r/2].
inline PlantedInstance make_no_instance(const PlantParams& p, std::uint64_t seed) {
    const std::size_t nw = std::size_t{1} << p.k;
    const double eps = std::ldexp(1.0, -static_cast<int>(p.r));
    Rng rng(seed, 2);
    std::vector<double> bg(nw);
    for (auto& x : bg) x = 0.5 * eps * rng.uniform();
    SubspaceBasis empty(nw);
    VerifierSpec spec = plant_verifier(p.k, p.m, empty, {}, bg, seed);
    std::sort(bg.begin(), bg.end(), std::greater<>{});
    return {std::move(spec), std::move(empty), InstanceKind::no, SpectralProfile(bg, Thresholds::amplified(p.r, p.q))};
}

// ---------------------------------------------------------------------------
// Classification

enum class Verdict { yes, no, violation };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::yes: return "yes";
        case Verdict::no: return "no";
        case Verdict::violation: return "violation";
    }
    return "?";
}

struct SpectralVerdict {
    Verdict verdict;
    std::size_t d = 0;               // number of eigenvalues >= c (yes only)
    std::vector<double> offending;   // eigenvalues breaking the promise (violation only)
};

/// Classification from the eigenvalues alone.
inline SpectralVerdict classify_spectrum(std::span<const double> eigs, const Thresholds& th) {
    th.validate();
    std::size_t above_c = 0;
    std::vector<double> gap;
    for (double x : eigs) {
        if (x >= th.c) ++above_c;
        else if (x > th.w) gap.push_back(x);
    }
    if (above_c >= 1 && above_c <= th.q && gap.empty()) return {Verdict::yes, above_c, {}};
    if (std::all_of(eigs.begin(), eigs.end(), [&](double x) { return x <= th.s; })) return {Verdict::no, 0, {}};
    std::vector<double> offending = gap;
    if (offending.empty())  // too many (or zero) eigenvalues above c, and some above s
        for (double x : eigs)
            if (x > th.s) offending.push_back(x);
    return {Verdict::violation, 0, std::move(offending)};
}

enum class SampledVerdict { yes, no, inconclusive };

inline const char* to_string(SampledVerdict v) {
    switch (v) {
        case SampledVerdict::yes: return "yes";
        case SampledVerdict::no: return "no";
        case SampledVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct Classification {
    SpectralVerdict spectral;
    std::vector<double> eigenvalues;
    SampledVerdict sampled;
    double subspace_gap = 0.0;   // ‖Π_{W_c} − Π_{W_w}‖_F
    double min_accept_in = 1.0;  // sampled over W_c
    double max_accept_out = 0.0; // sampled over W_c^⊥
    double max_accept_any = 0.0; // sampled over the whole witness space
    bool agree = false;
};

struct ClassifyOptions {
    std::size_t samples = 50;
    std::uint64_t seed = 0;
    double tol = kDerivedTol;
};

namespace detail {

inline Vector random_combination(Rng& rng, const SubspaceBasis& b) {
    Vector out(b.ambient_dim());
    for (const auto& v : b.vectors()) {
        const cplx c = rng.complex_gaussian();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * v[i];
    }
    const double n = norm(out);
    for (auto& x : out) x /= n;
    return out;
}

}  // namespace detail

/// Spectral verdict from E, cross-checked against the subspace semantics:
/// states in W_c must be accepted with probability >= c, states orthogonal
/// to W_c with probability <= w; on no-instances every state <= s.
inline Classification classify(const VerifierSpec& v, const Thresholds& th, const ClassifyOptions& opt = {}) {
    th.validate();
    const EighResult e = eigh(acceptance_operator(v));
    Classification out{classify_spectrum(e.values, th), e.values, SampledVerdict::inconclusive};

    std::vector<Vector> in_c, in_w, rest_c;
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        if (e.values[i] >= th.c) in_c.push_back(e.vectors[i]);
        else rest_c.push_back(e.vectors[i]);
        if (e.values[i] > th.w) in_w.push_back(e.vectors[i]);
    }
    const std::size_t nw = v.witness_dim();
    const SubspaceBasis w_c(SubspaceBasis::trusted, nw, in_c);
    const SubspaceBasis w_w(SubspaceBasis::trusted, nw, in_w);
    const SubspaceBasis w_c_perp(SubspaceBasis::trusted, nw, rest_c);
    out.subspace_gap = frobenius_distance(projector(w_c), projector(w_w));

    Rng rng(opt.seed, 3);
    for (std::size_t s = 0; s < opt.samples; ++s) {
        if (!w_c.empty()) out.min_accept_in = std::min(out.min_accept_in, acceptance_probability(v, detail::random_combination(rng, w_c)));
        if (!w_c_perp.empty())
            out.max_accept_out = std::max(out.max_accept_out, acceptance_probability(v, detail::random_combination(rng, w_c_perp)));
        out.max_accept_any = std::max(out.max_accept_any, acceptance_probability(v, random_unit_vector(rng, nw)));
    }
    for (std::size_t b = 0; b < nw; ++b)
        out.max_accept_any = std::max(out.max_accept_any, acceptance_probability(v, basis_vector(nw, b)));

    const bool dim_ok = w_c.dim() >= 1 && w_c.dim() <= th.q;
    if (dim_ok && out.min_accept_in >= th.c - opt.tol && out.max_accept_out <= th.w + opt.tol)
        out.sampled = SampledVerdict::yes;
    else if (w_c.empty() && out.max_accept_any <= th.s + opt.tol)
        out.sampled = SampledVerdict::no;

    switch (out.spectral.verdict) {
        case Verdict::yes: out.agree = out.sampled == SampledVerdict::yes && out.subspace_gap <= opt.tol; break;
        case Verdict::no: out.agree = out.sampled == SampledVerdict::no; break;
        case Verdict::violation: out.agree = out.sampled != SampledVerdict::yes; break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Amplification (exact eigenvalue transformation)

/// Σ_{j >= threshold} C(n, j) λ^j (1-λ)^{n-j}.
inline double amplify_spectral(double lambda, std::size_t n, std::size_t threshold) {
    if (threshold > n) throw std::invalid_argument("amplify_spectral: threshold exceeds repetition count");
    lambda = std::clamp(lambda, 0.0, 1.0);
    double acc = 0.0;
    for (std::size_t j = threshold; j <= n; ++j)
        acc += binomial(n, j) * std::pow(lambda, static_cast<double>(j)) * std::pow(1.0 - lambda, static_cast<double>(n - j));
    return std::clamp(acc, 0.0, 1.0);
}

inline std::size_t majority_threshold(std::size_t n) {
    if (n % 2 == 0) throw std::invalid_argument("majority_threshold: repetition count must be odd");
    return n / 2 + 1;
}

inline std::vector<double> amplify_spectral(std::span<const double> eigs, std::size_t n, std::size_t threshold) {
    std::vector<double> out;
    out.reserve(eigs.size());
    for (double x : eigs) out.push_back(amplify_spectral(x, n, threshold));
    return out;
}

/// Same eigenvectors, eigenvalues mapped through the binomial tail.
inline Matrix amplify_spectral(const Matrix& e, std::size_t n, std::size_t threshold) {
    EighResult dec = eigh(e);
    dec.values = amplify_spectral(dec.values, n, threshold);
    return reconstruct(dec);
}

/// Re-plants a verifier realizing the amplified spectrum on the same eigenvectors.
inline PlantedInstance amplify_instance(const PlantedInstance& inst, std::size_t n, std::size_t threshold,
                                        const Thresholds& new_thresholds, std::uint64_t seed) {
    EighResult dec = eigh(acceptance_operator(inst.spec));
    dec.values = amplify_spectral(dec.values, n, threshold);
    const std::size_t d = inst.planted_basis.dim();
    std::vector<Vector> top(dec.vectors.vectors().begin(), dec.vectors.vectors().begin() + static_cast<std::ptrdiff_t>(d));
    VerifierSpec spec = plant_verifier(inst.spec.k(), inst.spec.m(), dec, seed);
    return {std::move(spec), SubspaceBasis(SubspaceBasis::trusted, dec.vectors.ambient_dim(), std::move(top)), inst.kind,
            SpectralProfile(dec.values, new_thresholds)};
}

}  // namespace fqma
