#pragma once

// The reduction from a few-witness verifier to unique-witness oracle calls:
// alternating-subspace test, t-fold witness test, the combined acceptance
// operator and the loop over t = 1..q.

#include <cmath>
#include <optional>
#include <vector>

#include "fqma/linalg.hpp"
#include "fqma/permgroup.hpp"
#include "fqma/subspace.hpp"
#include "fqma/verifier.hpp"

namespace fqma {

inline constexpr double kNegligibleProbability = 1e-12;

struct TestOutcome {
    double accept_probability;
    std::optional<PureState> post_state;  // normalized state of the tested register on accept
};

/// K such that K^t == dim.
inline std::size_t local_dimension(std::size_t dim, std::size_t t) {
    if (t == 0) throw std::invalid_argument("local_dimension: t must be positive");
    const auto guess = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(dim), 1.0 / static_cast<double>(t))));
    for (std::size_t k = (guess > 1 ? guess - 1 : 1); k <= guess + 1; ++k)
        if (int_pow(k, t) == dim) return k;
    throw std::invalid_argument("state dimension is not a t-th power");
}

namespace detail {

inline TestOutcome outcome_from(Vector projected, std::vector<std::size_t> layout) {
    const double p = std::pow(norm(projected), 2);
    TestOutcome out{std::clamp(p, 0.0, 1.0), std::nullopt};
    if (p > kNegligibleProbability) out.post_state = PureState::normalized(std::move(projected), std::move(layout));
    return out;
}

}  // namespace detail

/// Projective measurement of the antisymmetrizer A_t.
inline TestOutcome alt_test_exact(const PureState& state, std::size_t t) {
    const std::size_t k = local_dimension(state.dim(), t);
    const Matrix a = antisymmetrizer(t, k);
    return detail::outcome_from(a * state.amplitudes(), std::vector<std::size_t>(t, k));
}

/// Circuit form: prepare (1/√t!) Σ_π |π⟩ on a control register, apply
/// |π⟩|ψ⟩ ↦ |π⟩ U_π|ψ⟩, then measure |perm_t⟩⟨perm_t| ⊗ I with
/// |perm_t⟩ = (1/√t!) Σ_π sgn(π) |π⟩.
inline TestOutcome alt_test_circuit(const PureState& state, std::size_t t) {
    check_degree(t);
    const std::size_t k = local_dimension(state.dim(), t);
    const std::size_t dim = state.dim();
    const auto perms = enumerate(t);
    const std::size_t nperm = perms.size();
    if (nperm * dim > kMaxAmbientDim * 6) throw std::overflow_error("alt_test_circuit: register too large");

    // Joint register R ⊗ S, R index = lexicographic permutation index.
    const double amp = 1.0 / std::sqrt(static_cast<double>(nperm));
    Vector joint(nperm * dim);
    for (std::size_t r = 0; r < nperm; ++r)
        for (std::size_t s = 0; s < dim; ++s) joint[r * dim + s] = amp * state.amplitudes()[s];

    for (std::size_t r = 0; r < nperm; ++r) {
        const Vector block(joint.begin() + static_cast<std::ptrdiff_t>(r * dim),
                           joint.begin() + static_cast<std::ptrdiff_t>((r + 1) * dim));
        const Vector moved = apply_permutation(perms[r], block, k);
        std::copy(moved.begin(), moved.end(), joint.begin() + static_cast<std::ptrdiff_t>(r * dim));
    }

    Vector perm_state(nperm);
    for (std::size_t r = 0; r < nperm; ++r) perm_state[perm_index(perms[r])] = perms[r].sign() * amp;

    // (⟨perm_t| ⊗ I) applied to the joint state.
    Vector s_register(dim);
    for (std::size_t r = 0; r < nperm; ++r) {
        const cplx c = std::conj(perm_state[r]);
        for (std::size_t s = 0; s < dim; ++s) s_register[s] += c * joint[r * dim + s];
    }
    return detail::outcome_from(std::move(s_register), std::vector<std::size_t>(t, k));
}

/// Runs V on each (T_i, Z_i) pair with Z_i = |0^m⟩ and accepts iff every
/// copy accepts: ‖(Π_acc V)^{⊗t} (|ψ⟩ ⊗ |0^{tm}⟩)‖².
inline double wit_test(const VerifierSpec& v, const PureState& state, std::size_t t) {
    const std::size_t nw = v.witness_dim();
    const std::size_t na = v.ancilla_dim();
    const std::size_t block = v.total_dim();
    if (state.dim() != int_pow(nw, t)) throw std::invalid_argument("wit_test: state is not on (2^k)^t");
    if (int_pow(block, t) > (std::size_t{1} << 20)) throw std::overflow_error("wit_test: register too large");

    const std::size_t joint_dim = int_pow(block, t);
    Vector joint(joint_dim);
    for (std::size_t idx = 0; idx < state.dim(); ++idx) {
        std::size_t rem = idx, pos = 0, stride = 1;
        for (std::size_t f = 0; f < t; ++f) {
            const std::size_t w = rem % nw;
            rem /= nw;
            pos += (w * na) * stride;
            stride *= block;
        }
        joint[pos] = state.amplitudes()[idx];
    }
    const std::vector<std::size_t> layout(t, block);
    for (std::size_t f = 0; f < t; ++f) joint = apply_to_factor(joint, layout, f, v.unitary());

    double p = 0.0;
    for (std::size_t idx = 0; idx < joint_dim; ++idx) {
        std::size_t rem = idx;
        bool all_accept = true;
        for (std::size_t f = 0; f < t && all_accept; ++f) {
            all_accept = (rem % block) >= block / 2;
            rem /= block;
        }
        if (all_accept) p += std::norm(joint[idx]);
    }
    return p;
}

/// ⟨ψ|E^{⊗t}|ψ⟩.
inline double wit_test_exact(const Matrix& e, const PureState& state, std::size_t t) {
    return expectation(kron_power(e, t), state.amplitudes()).real();
}

struct CombinedOperator {
    std::size_t t;
    Matrix g;  // A_t E^{⊗t} A_t on (2^k)^{⊗t}
    VerifierSpec source;
};

inline CombinedOperator combined_operator(const VerifierSpec& v, std::size_t t) {
    check_degree(t);
    check_tensor_power(v.witness_dim(), t);
    const Matrix a = antisymmetrizer(t, v.witness_dim());
    const Matrix e_t = kron_power(acceptance_operator(v), t);
    return {t, a * e_t * a, v};
}

struct OracleResult {
    Verdict verdict;
    double lambda1;
    double lambda2;
};

/// Decides the unique-witness promise problem by exact diagonalization:
/// yes if λ1 >= accept and λ2 <= reject, no if λ1 <= reject.
inline OracleResult uqma_oracle(const Matrix& g, double accept_threshold = 2.0 / 3.0, double reject_threshold = 1.0 / 3.0) {
    const std::vector<double> eigs = eigvalsh(g);
    const double l1 = eigs.empty() ? 0.0 : eigs[0];
    const double l2 = eigs.size() < 2 ? 0.0 : eigs[1];
    Verdict v = Verdict::violation;
    if (l1 >= accept_threshold && l2 <= reject_threshold) v = Verdict::yes;
    else if (l1 <= reject_threshold) v = Verdict::no;
    return {v, l1, l2};
}

inline OracleResult uqma_oracle(const CombinedOperator& g, double accept_threshold = 2.0 / 3.0,
                                double reject_threshold = 1.0 / 3.0) {
    return uqma_oracle(g.g, accept_threshold, reject_threshold);
}

struct TraceEntry {
    std::size_t t;
    double lambda1;
    double lambda2;
    Verdict verdict;
};

struct ReductionResult {
    bool accept = false;
    std::optional<std::size_t> accepted_at;
    std::vector<TraceEntry> trace;
};

struct ReductionOptions {
    // Keep querying after the first yes, for observation only; the verdict is unchanged.
    bool full_trace = false;
};

/// For t = 1..q query the oracle on A_t E^{⊗t} A_t; accept on the first yes.
/// A promise violation is recorded and treated as a non-accepting answer.
inline ReductionResult algorithm_A(const VerifierSpec& v, std::size_t q, const ReductionOptions& opt = {}) {
    if (q < 1) throw std::invalid_argument("algorithm_A: q must be at least 1");
    check_tensor_power(v.witness_dim(), q);
    ReductionResult res;
    for (std::size_t t = 1; t <= q; ++t) {
        const OracleResult o = uqma_oracle(combined_operator(v, t));
        res.trace.push_back({t, o.lambda1, o.lambda2, o.verdict});
        if (o.verdict == Verdict::yes && !res.accept) {
            res.accept = true;
            res.accepted_at = t;
            if (!opt.full_trace) break;
        }
    }
    return res;
}

inline ReductionResult algorithm_A(const PlantedInstance& inst, std::size_t q, const ReductionOptions& opt = {}) {
    return algorithm_A(inst.spec, q, opt);
}

}  // namespace fqma
