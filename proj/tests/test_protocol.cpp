#include <gtest/gtest.h>

#include <cmath>

#include "fqma/protocol.hpp"
#include "fqma/random.hpp"
#include "test_util.hpp"

using namespace fqma;

namespace {

const double kH = 1.0 / std::sqrt(2.0);

PureState singlet() { return PureState(Vector{0.0, kH, -kH, 0.0}, {2, 2}); }

// Random state restricted to a subspace.
Vector random_in(Rng& rng, const SubspaceBasis& b) {
    Vector out(b.ambient_dim());
    for (const auto& v : b.vectors()) {
        const cplx c = rng.complex_gaussian();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * v[i];
    }
    const double n = norm(out);
    for (auto& x : out) x /= n;
    return out;
}

// Planted yes instance with every accepted eigenvalue exactly 1 - 2^-8 and background 0.
PlantedInstance sharp_yes(std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    const SubspaceBasis w = random_subspace(rng, 4, d);
    const double top = 1.0 - std::ldexp(1.0, -8);
    const std::vector<double> acc(d, top), bg(4 - d, 0.0);
    std::vector<double> all = acc;
    all.insert(all.end(), bg.begin(), bg.end());
    return {plant_verifier(2, 1, w, acc, bg, seed), w, InstanceKind::yes, SpectralProfile(all, Thresholds::amplified(8, 3))};
}

}  // namespace

TEST(AltTest, SingletAcceptedUnchanged) {
    const auto out = alt_test_exact(singlet(), 2);
    EXPECT_NEAR(out.accept_probability, 1.0, 1e-15);
    ASSERT_TRUE(out.post_state.has_value());
    EXPECT_NEAR(fidelity_amplitude(*out.post_state, singlet()), 1.0, 1e-15);
    EXPECT_NEAR(alt_test_circuit(singlet(), 2).accept_probability, 1.0, 1e-15);
}

TEST(AltTest, SymmetricProductRejected) {
    Rng rng(3);
    const Vector psi = random_unit_vector(rng, 2);
    const PureState s(kron(psi, psi), {2, 2});
    const auto out = alt_test_exact(s, 2);
    EXPECT_NEAR(out.accept_probability, 0.0, 1e-15);
    EXPECT_FALSE(out.post_state.has_value());
    EXPECT_NEAR(alt_test_circuit(PureState(basis_vector(4, 0), {2, 2}), 2).accept_probability, 0.0, 1e-15);
}

TEST(AltTest, BasisStateHalfAccepted) {
    const auto out = alt_test_exact(PureState(basis_vector(4, 1), {2, 2}), 2);
    EXPECT_NEAR(out.accept_probability, 0.5, 1e-15);
    ASSERT_TRUE(out.post_state.has_value());
    EXPECT_NEAR(fidelity_amplitude(*out.post_state, singlet()), 1.0, 1e-15);
}

TEST(AltTest, CircuitMatchesExact) {
    Rng rng(44);
    for (std::size_t k : {2u, 4u})
        for (std::size_t t : {2u, 3u})
            for (int s = 0; s < 30; ++s) {
                const PureState psi = random_state(rng, std::vector<std::size_t>(t, k));
                const auto a = alt_test_exact(psi, t);
                const auto b = alt_test_circuit(psi, t);
                ASSERT_NEAR(a.accept_probability, b.accept_probability, 1e-9);
                ASSERT_EQ(a.post_state.has_value(), b.post_state.has_value());
                if (a.post_state) {
                    ASSERT_NEAR(fidelity_amplitude(*a.post_state, *b.post_state), 1.0, 1e-9);
                }
            }
}

TEST(AltTest, DegreeOneAcceptsEverything) {
    Rng rng(1);
    const PureState psi = random_state(rng, 4);
    EXPECT_NEAR(alt_test_exact(psi, 1).accept_probability, 1.0, 1e-12);
    EXPECT_NEAR(alt_test_circuit(psi, 1).accept_probability, 1.0, 1e-12);
}

TEST(AltTest, RejectsNonPowerDimension) {
    const PureState s(Vector{1.0, 0.0, 0.0}, {3});
    EXPECT_THROW(alt_test_exact(s, 2), std::invalid_argument);
}

TEST(WitTest, CircuitMatchesQuadraticForm) {
    Rng rng(8);
    const auto inst = make_yes_instance({2, 1, 2, 3, 8}, 8);
    const Matrix e = acceptance_operator(inst.spec);
    for (std::size_t t = 1; t <= 3; ++t)
        for (int s = 0; s < 5; ++s) {
            const PureState psi = random_state(rng, std::vector<std::size_t>(t, 4));
            EXPECT_NEAR(wit_test(inst.spec, psi, t), wit_test_exact(e, psi, t), 1e-10);
        }
}

TEST(WitTest, YesInstanceBounds) {
    const double eps = std::ldexp(1.0, -8);
    Rng rng(9);
    for (std::size_t t = 1; t <= 3; ++t) {
        const auto inst = sharp_yes(2, 50 + t);
        const SubspaceBasis w_t = tensor_power_basis(inst.planted_basis, t);
        const SubspaceBasis w_t_perp = orth_complement(w_t);
        for (int s = 0; s < 10; ++s) {
            const PureState in(random_in(rng, w_t), std::vector<std::size_t>(t, 4));
            EXPECT_GE(wit_test(inst.spec, in, t), 1.0 - static_cast<double>(t) * eps - 1e-12);
            const PureState out(random_in(rng, w_t_perp), std::vector<std::size_t>(t, 4));
            EXPECT_LE(wit_test(inst.spec, out, t), static_cast<double>(t) * eps + 1e-12);
        }
    }
}

TEST(WitTest, NoInstanceBound) {
    const double eps = std::ldexp(1.0, -8);
    Rng rng(10);
    const auto inst = make_no_instance({2, 1, 1, 3, 8}, 10);
    for (std::size_t t = 1; t <= 3; ++t)
        for (int s = 0; s < 10; ++s) {
            const PureState psi = random_state(rng, std::vector<std::size_t>(t, 4));
            EXPECT_LE(wit_test(inst.spec, psi, t), eps);
        }
}

TEST(Combined, TrivialVerifierGivesAntisymmetrizer) {
    // Sends |w>|0> to the accepting basis state 4 + w: accepts every witness.
    std::vector<AssignedColumn> cols;
    for (std::size_t w = 0; w < 4; ++w) cols.push_back({2 * w, basis_vector(8, 4 + w)});
    const VerifierSpec v(2, 1, complete_unitary(cols, 8));
    EXPECT_LE(frobenius_distance(acceptance_operator(v), Matrix::identity(4)), 1e-15);
    for (std::size_t t = 1; t <= 3; ++t)
        EXPECT_LE(frobenius_distance(combined_operator(v, t).g, antisymmetrizer(t, 4)), 1e-12);
}

TEST(Combined, IsPsdContraction) {
    const auto inst = make_yes_instance({2, 1, 2, 3, 8}, 2);
    for (std::size_t t = 1; t <= 3; ++t) {
        const auto g = combined_operator(inst.spec, t);
        EXPECT_TRUE(is_hermitian(g.g, 1e-12));
        const auto eig = eigvalsh(g.g);
        EXPECT_GE(eig.back(), -1e-8);
        EXPECT_LE(eig.front(), 1.0 + 1e-8);
    }
}

TEST(Combined, TopEigenvectorIsSlaterState) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto inst = make_yes_instance({2, 1, 2, 3, 8}, seed);
        const auto e = eigh(combined_operator(inst.spec, 2).g);
        const PureState top(e.vectors[0], {4, 4});
        EXPECT_GE(std::pow(fidelity_amplitude(top, slater(inst.planted_basis)), 2), 0.999);
    }
}

TEST(Combined, SequentialMeasurementIdentity) {
    Rng rng(13);
    const auto inst = make_yes_instance({2, 1, 2, 3, 8}, 13);
    for (std::size_t t = 2; t <= 3; ++t) {
        const auto g = combined_operator(inst.spec, t);
        for (int s = 0; s < 30; ++s) {
            const PureState psi = random_state(rng, std::vector<std::size_t>(t, 4));
            const auto alt = alt_test_circuit(psi, t);
            const double p_wit = alt.post_state ? wit_test(inst.spec, *alt.post_state, t) : 0.0;
            EXPECT_NEAR(expectation(g.g, psi.amplitudes()).real(), alt.accept_probability * p_wit, 1e-9);
        }
    }
}

TEST(Combined, SlaterStateSeparatesFromComplement) {
    Rng rng(14);
    for (std::size_t d = 2; d <= 3; ++d) {
        const auto inst = make_yes_instance({2, 1, d, 3, 8}, 20 + d);
        const Matrix g = combined_operator(inst.spec, d).g;
        const PureState w_alt = slater(inst.planted_basis);
        EXPECT_GE(expectation(g, w_alt.amplitudes()).real(), 2.0 / 3.0);
        EXPECT_LE(eigvalsh(g)[1], 1.0 / 3.0);
        for (int s = 0; s < 20; ++s) {
            Vector phi = random_vector(rng, w_alt.dim());
            const cplx ov = inner(w_alt.amplitudes(), phi);
            for (std::size_t i = 0; i < phi.size(); ++i) phi[i] -= ov * w_alt.amplitudes()[i];
            const PureState p = PureState::normalized(std::move(phi));
            EXPECT_LE(expectation(g, p.amplitudes()).real(), 1.0 / 3.0);
        }
    }
}

TEST(Oracle, SpectrumExamples) {
    EXPECT_EQ(uqma_oracle(Matrix(2, 2, {0.9, 0.0, 0.0, 0.1})).verdict, Verdict::yes);
    EXPECT_EQ(uqma_oracle(Matrix(2, 2, {0.2, 0.0, 0.0, 0.0})).verdict, Verdict::no);
    const auto v = uqma_oracle(Matrix(2, 2, {0.9, 0.0, 0.0, 0.5}));
    EXPECT_EQ(v.verdict, Verdict::violation);
    EXPECT_DOUBLE_EQ(v.lambda1, 0.9);
    EXPECT_DOUBLE_EQ(v.lambda2, 0.5);
}

TEST(Reduction, YesInstanceAcceptsAtPlantedDimension) {
    const auto inst = make_yes_instance({2, 1, 2, 3, 8}, 3);
    const auto r = algorithm_A(inst, 3, {true});
    EXPECT_TRUE(r.accept);
    ASSERT_TRUE(r.accepted_at.has_value());
    EXPECT_EQ(*r.accepted_at, 2u);
    ASSERT_EQ(r.trace.size(), 3u);
    EXPECT_EQ(r.trace[1].verdict, Verdict::yes);
    EXPECT_GE(r.trace[1].lambda1, 2.0 / 3.0);
    EXPECT_LE(r.trace[1].lambda2, 1.0 / 3.0);
    // t = 1 sees two accepting directions; t = 3 exceeds dim W so nothing accepts.
    EXPECT_EQ(r.trace[0].verdict, Verdict::violation);
    EXPECT_EQ(r.trace[2].verdict, Verdict::no);
}

TEST(Reduction, StopsAtFirstYesByDefault) {
    const auto inst = make_yes_instance({2, 1, 1, 3, 8}, 4);
    const auto r = algorithm_A(inst, 3);
    EXPECT_TRUE(r.accept);
    EXPECT_EQ(*r.accepted_at, 1u);
    EXPECT_EQ(r.trace.size(), 1u);
}

TEST(Reduction, NoInstanceRejectsAtEveryDegree) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto inst = make_no_instance({2, 1, 1, 3, 8}, seed);
        const auto r = algorithm_A(inst, 3);
        EXPECT_FALSE(r.accept);
        ASSERT_EQ(r.trace.size(), 3u);
        const double top = eigvalsh(acceptance_operator(inst.spec)).front();
        for (const auto& e : r.trace) {
            EXPECT_EQ(e.verdict, Verdict::no);
            EXPECT_LE(e.lambda1, top + 1e-12);
        }
    }
}

TEST(Reduction, RejectsBadParameters) {
    const auto v = VerifierSpec::identity(2, 1);
    EXPECT_THROW(algorithm_A(v, 0), std::invalid_argument);
    EXPECT_THROW(algorithm_A(v, 7), std::overflow_error);
}
