#pragma once

// Symmetric and alternating subspaces of H^{⊗t}, Slater-determinant states,
// and numerical certification of how W^{⊗t} interacts with the alternating
// subspace.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fqma/linalg.hpp"
#include "fqma/permgroup.hpp"
#include "fqma/random.hpp"

namespace fqma {

enum class Symmetry { sym, alt };

inline double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(r);
}

namespace detail {

inline Matrix group_average(std::size_t t, std::size_t local_dim, bool signed_sum) {
    check_degree(t);
    check_tensor_power(local_dim, t);
    const std::size_t dim = int_pow(local_dim, t);
    const auto perms = enumerate(t);
    const double weight = 1.0 / static_cast<double>(perms.size());
    Matrix out(dim, dim);
    for (const auto& p : perms) {
        const double s = signed_sum ? p.sign() * weight : weight;
        for (std::size_t idx = 0; idx < dim; ++idx) out(permute_basis_index(p, idx, local_dim), idx) += s;
    }
    return out;
}

}  // namespace detail

/// (1/t!) Σ_π sgn(π) U_π on (K)^{⊗t}.
inline Matrix antisymmetrizer(std::size_t t, std::size_t local_dim) { return detail::group_average(t, local_dim, true); }

/// (1/t!) Σ_π U_π on (K)^{⊗t}.
inline Matrix symmetrizer(std::size_t t, std::size_t local_dim) { return detail::group_average(t, local_dim, false); }

/// (I ± U_{π_ij}) / 2, with + for sym and - for alt. i, j are 0-based.
inline Matrix pair_projector(Symmetry kind, std::size_t i, std::size_t j, std::size_t t, std::size_t local_dim) {
    if (i == j) throw std::invalid_argument("pair_projector: i and j must differ");
    const Matrix u = perm_unitary(Permutation::transposition(t, i, j), local_dim);
    const Matrix id = Matrix::identity(u.rows());
    return (kind == Symmetry::sym ? id + u : id - u) * cplx{0.5};
}

struct AltSymContext {
    std::size_t t;
    std::size_t local_dim;
    Matrix antisym;
    Matrix sym;

    AltSymContext(std::size_t t_, std::size_t k_)
        : t(t_), local_dim(k_), antisym(antisymmetrizer(t_, k_)), sym(symmetrizer(t_, k_)) {}
};

/// Orthonormal basis of W^{⊗t}, in lexicographic order of basis-index tuples.
inline SubspaceBasis tensor_power_basis(const SubspaceBasis& w, std::size_t t) {
    check_tensor_power(w.ambient_dim(), t);
    std::vector<Vector> out{Vector{cplx{1.0}}};
    for (std::size_t f = 0; f < t; ++f) {
        std::vector<Vector> next;
        next.reserve(out.size() * w.dim());
        for (const auto& v : out)
            for (const auto& b : w.vectors()) next.push_back(kron(v, b));
        out = std::move(next);
    }
    return SubspaceBasis(SubspaceBasis::trusted, int_pow(w.ambient_dim(), t), std::move(out));
}

/// Basis of the range of a Hermitian projector, by Gram-Schmidt of its columns.
inline SubspaceBasis range_basis(const Matrix& p, double tol = kRankTol) {
    std::vector<Vector> cols;
    cols.reserve(p.cols());
    for (std::size_t j = 0; j < p.cols(); ++j) cols.push_back(p.column(j));
    return gram_schmidt(cols, p.rows(), tol);
}

/// Antisymmetrized product of an orthonormal basis of W (a Slater determinant):
/// (1/√d!) Σ_π sgn(π) U_π |w_1⟩…|w_d⟩.
inline PureState slater(const SubspaceBasis& w) {
    const std::size_t d = w.dim();
    const std::size_t k = w.ambient_dim();
    if (d < 1 || d > 4) throw std::invalid_argument("slater: basis size must be in [1, 4]");
    check_tensor_power(k, d);
    w.validate(kStructuralTol);

    Vector product{cplx{1.0}};
    for (const auto& v : w.vectors()) product = kron(product, v);

    const auto perms = enumerate(d);
    Vector out(product.size());
    const double weight = 1.0 / std::sqrt(static_cast<double>(perms.size()));
    for (const auto& p : perms) {
        const Vector moved = apply_permutation(p, product, k);
        const double s = p.sign() * weight;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * moved[i];
    }
    return PureState(std::move(out), std::vector<std::size_t>(d, k));
}

// ---------------------------------------------------------------------------
// Claim verification

struct ClaimCheck {
    std::string name;
    std::string anchor;
    double value;
    double threshold;
    bool pass;
};

struct ClaimReport {
    std::size_t d, t, local_dim;
    std::uint64_t seed;
    std::vector<ClaimCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    const ClaimCheck& find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return c;
        throw std::out_of_range("ClaimReport: no check named " + name);
    }
};

struct ClaimOptions {
    double tol = kDerivedTol;
    double structural_tol = kStructuralTol;
    double trace_tol = 1e-6;
    std::size_t orthogonal_samples = 20;
    // Negative control: perturbs the antisymmetrizer before the checks run.
    bool corrupt_antisymmetrizer = false;
};

/// Certifies, for a random d-dimensional W ⊂ C^K:
///  - the complement of Alt within W^{⊗t} equals Σ_{i≠j} Sym_ij restricted to W^{⊗t}
///  - Alt ∩ W^{⊗d} is one-dimensional and spanned by the Slater state, for any basis
///  - the antisymmetrizer commutes with the projector onto W^{⊗t}
///  - A_d maps states orthogonal to the Slater state into (W^{⊗d})^⊥
///  - trace(A_t) = C(K,t), trace(S_t) = C(K+t-1,t)
inline ClaimReport verify_claims(std::size_t d, std::size_t t, std::size_t local_dim, std::uint64_t seed,
                                 const ClaimOptions& opt = {}) {
    if (t < 2 || t > d || d > local_dim)
        throw std::invalid_argument("verify_claims: requires 2 <= t <= d <= K");
    check_tensor_power(local_dim, std::max(t, d));

    ClaimReport rep{d, t, local_dim, seed, {}};
    auto add = [&](std::string name, std::string anchor, double value, double threshold, bool pass) {
        rep.checks.push_back({std::move(name), std::move(anchor), value, threshold, pass});
    };

    Rng rng(seed, 0);
    const SubspaceBasis w = random_subspace(rng, local_dim, d);

    Matrix a_t = antisymmetrizer(t, local_dim);
    const Matrix s_t = symmetrizer(t, local_dim);
    Matrix a_d = antisymmetrizer(d, local_dim);
    if (opt.corrupt_antisymmetrizer) {
        a_t(0, 1) += 0.25;
        a_t(1, 0) += 0.25;
        a_d(0, 1) += 0.25;
        a_d(1, 0) += 0.25;
    }

    // Projector structure and dimensions.
    const double idem = std::max(frobenius_distance(a_t * a_t, a_t), hermiticity_residual(a_t));
    add("antisymmetrizer_projector", "alternating-projector", idem, opt.structural_tol, idem <= opt.structural_tol);
    const double alt_trace = trace(a_t).real();
    const double alt_dim = binomial(local_dim, t);
    add("alt_trace", "alt-dimension-binomial", std::abs(alt_trace - alt_dim), opt.trace_tol,
        std::abs(alt_trace - alt_dim) <= opt.trace_tol);
    const double sym_trace = trace(s_t).real();
    const double sym_dim = binomial(local_dim + t - 1, t);
    add("sym_trace", "sym-dimension-binomial", std::abs(sym_trace - sym_dim), opt.trace_tol,
        std::abs(sym_trace - sym_dim) <= opt.trace_tol);

    // Complement of Alt inside W^{⊗t} vs. the span of the pairwise symmetric parts.
    const SubspaceBasis w_t = tensor_power_basis(w, t);
    const SubspaceBasis alt_w_t = intersect(range_basis(a_t), w_t);
    const SubspaceBasis lhs = relative_complement(alt_w_t, w_t);
    std::vector<Vector> sym_parts;
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = i + 1; j < t; ++j) {
            const Permutation swap_ij = Permutation::transposition(t, i, j);
            for (const auto& v : w_t.vectors()) {
                Vector part = apply_permutation(swap_ij, v, local_dim);
                for (std::size_t r = 0; r < part.size(); ++r) part[r] = 0.5 * (part[r] + v[r]);
                sym_parts.push_back(std::move(part));
            }
        }
    const SubspaceBasis rhs = gram_schmidt(sym_parts, w_t.ambient_dim());
    const double c1 = frobenius_distance(projector(lhs), projector(rhs));
    add("pairwise_sym_decomposition", "alt-complement-is-sum-of-pairwise-sym", c1, opt.tol, c1 <= opt.tol);

    // Alt ∩ W^{⊗d} is spanned by the Slater state.
    const Matrix p_w_d = kron_power(projector(w), d);
    const double tr_d = trace(a_d * p_w_d).real();
    add("alt_w_d_trace", "unique-alternating-state", std::abs(tr_d - 1.0), opt.tol, std::abs(tr_d - 1.0) <= opt.tol);
    const SubspaceBasis alt_w_d = intersect(range_basis(a_d), tensor_power_basis(w, d));
    add("alt_w_d_rank", "unique-alternating-state", static_cast<double>(alt_w_d.dim()), 1.0, alt_w_d.dim() == 1);

    const PureState w_alt = slater(w);
    const Vector projected = a_d * w_alt.amplitudes();
    double member = 0.0;
    for (std::size_t i = 0; i < projected.size(); ++i) member += std::norm(projected[i] - w_alt.amplitudes()[i]);
    member = std::sqrt(member);
    add("slater_membership", "unique-alternating-state", member, opt.structural_tol, member <= opt.structural_tol);

    const Matrix rot = random_unitary(rng, d);
    std::vector<Vector> rotated(d, Vector(local_dim));
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t r = 0; r < local_dim; ++r) rotated[j][r] += rot(i, j) * w[i][r];
    const PureState w_alt2 = slater(SubspaceBasis(local_dim, rotated));
    const double overlap_gap = std::abs(fidelity_amplitude(w_alt, w_alt2) - 1.0);
    add("slater_basis_independence", "unique-alternating-state", overlap_gap, opt.structural_tol,
        overlap_gap <= opt.structural_tol);

    // Commutation of A_t with Π_{W^{⊗t}}.
    const Matrix p_w_t = kron_power(projector(w), t);
    const double c3 = frobenius_norm(commutator(a_t, p_w_t));
    add("alt_commutes_with_product", "alt-commutes-with-product-subspace", c3, opt.tol, c3 <= opt.tol);

    // A_d|φ⟩ ∈ (W^{⊗d})^⊥ for |φ⟩ ⊥ |W_alt⟩.
    double c4 = 0.0;
    for (std::size_t s = 0; s < opt.orthogonal_samples; ++s) {
        Vector phi = random_vector(rng, w_alt.dim());
        const cplx ov = inner(w_alt.amplitudes(), phi);
        for (std::size_t i = 0; i < phi.size(); ++i) phi[i] -= ov * w_alt.amplitudes()[i];
        const PureState phi_state = PureState::normalized(std::move(phi));
        const Vector image = p_w_d * (a_d * phi_state.amplitudes());
        c4 = std::max(c4, norm(image));
    }
    add("alt_image_leaves_product", "alt-image-orthogonal-to-product", c4, opt.tol, c4 <= opt.tol);
    return rep;
}

}  // namespace fqma
