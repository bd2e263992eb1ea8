#include <gtest/gtest.h>

#include <cmath>

#include "fqma/random.hpp"
#include "fqma/verifier.hpp"
#include "test_util.hpp"

using namespace fqma;

namespace {

Matrix hadamard_on_witness() {
    const double h = 1.0 / std::sqrt(2.0);
    return kron(Matrix(2, 2, {h, h, h, -h}), Matrix::identity(2));
}

VerifierSpec planted_two_dim(std::uint64_t seed, SubspaceBasis* basis_out = nullptr) {
    Rng rng(seed);
    const SubspaceBasis w = random_subspace(rng, 4, 2);
    if (basis_out) *basis_out = w;
    const std::vector<double> acc{0.99, 0.99}, bg{0.01, 0.0};
    return plant_verifier(2, 1, w, acc, bg, seed);
}

}  // namespace

TEST(Projectors, IdentityVerifier) {
    const auto v = VerifierSpec::identity(1, 1);
    Matrix expected(4, 4);
    expected(2, 2) = 1.0;  // |1>|0>
    EXPECT_EQ(pi_x(v), expected);
    const auto eig = eigvalsh(pi_x(v));
    EXPECT_EQ(eig, (std::vector<double>{1.0, 0.0, 0.0, 0.0}));

    Matrix e(2, 2);
    e(1, 1) = 1.0;
    EXPECT_EQ(acceptance_operator(v), e);
}

TEST(Projectors, HadamardVerifierByHand) {
    // Π_x = |−⟩⟨−| ⊗ |0⟩⟨0|: only the |10> branch of H|w>|0> survives.
    const VerifierSpec v(1, 1, hadamard_on_witness());
    Matrix expected(4, 4);
    expected(0, 0) = 0.5;
    expected(0, 2) = -0.5;
    expected(2, 0) = -0.5;
    expected(2, 2) = 0.5;
    EXPECT_LE(frobenius_distance(pi_x(v), expected), 1e-15);
    const auto eig = eigvalsh(pi_x(v));
    EXPECT_NEAR(eig[0], 1.0, 1e-14);
    EXPECT_NEAR(eig[1], 0.0, 1e-14);
    // Every computational witness is accepted with probability 1/2.
    EXPECT_NEAR(acceptance_probability(v, basis_vector(2, 0)), 0.5, 1e-15);
    EXPECT_NEAR(acceptance_probability(v, basis_vector(2, 1)), 0.5, 1e-15);
}

TEST(Projectors, QuadraticFormIdentity) {
    Rng rng(17);
    const VerifierSpec v(2, 2, random_unitary(rng, 16));
    const Matrix px = pi_x(v);
    const Matrix acc = pi_acc(v), init = pi_init(v);
    for (int s = 0; s < 20; ++s) {
        const Vector u = random_unit_vector(rng, 16);
        const double lhs = std::pow(norm(acc * (v.unitary() * (init * u))), 2);
        EXPECT_NEAR(lhs, expectation(px, u).real(), 1e-9);
    }
}

TEST(Projectors, CompressionSharesNonzeroSpectrum) {
    Rng rng(18);
    const VerifierSpec v(2, 1, random_unitary(rng, 8));
    const auto full = eigvalsh(pi_x(v));
    const auto small = eigvalsh(acceptance_operator(v));
    for (std::size_t i = 0; i < small.size(); ++i) EXPECT_NEAR(full[i], small[i], 1e-8);
    for (std::size_t i = small.size(); i < full.size(); ++i) EXPECT_NEAR(full[i], 0.0, 1e-8);
}

TEST(Projectors, AcceptanceProbabilityMatchesOperator) {
    Rng rng(19);
    const VerifierSpec v(3, 1, random_unitary(rng, 16));
    const Matrix e = acceptance_operator(v);
    for (int s = 0; s < 10; ++s) {
        const Vector psi = random_unit_vector(rng, 8);
        EXPECT_NEAR(acceptance_probability(v, psi), expectation(e, psi).real(), 1e-12);
    }
}

TEST(VerifierSpecTest, RejectsBadInput) {
    EXPECT_THROW(VerifierSpec(1, 1, Matrix::identity(2)), std::invalid_argument);
    EXPECT_THROW(VerifierSpec(1, 1, Matrix(4, 4, std::vector<cplx>(16, 0.5))), std::invalid_argument);
    EXPECT_THROW(VerifierSpec::identity(0, 1), std::invalid_argument);
    EXPECT_THROW(VerifierSpec::identity(8, 5), std::overflow_error);
}

TEST(Planting, SingleDirectionAcceptedWithCertainty) {
    Rng rng(2);
    const SubspaceBasis w = random_subspace(rng, 4, 1);
    const std::vector<double> acc{1.0}, bg{0.0, 0.0, 0.0};
    const auto v = plant_verifier(2, 1, w, acc, bg, 2);
    EXPECT_NEAR(acceptance_probability(v, w[0]), 1.0, 1e-12);
    const SubspaceBasis rest = orth_complement(w);
    for (const auto& u : rest.vectors()) EXPECT_NEAR(acceptance_probability(v, u), 0.0, 1e-12);
}

TEST(Planting, SpectrumRoundTrip) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        SubspaceBasis w(4);
        const auto v = planted_two_dim(seed, &w);
        const auto e = eigh(acceptance_operator(v));
        const std::vector<double> expected{0.99, 0.99, 0.01, 0.0};
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(e.values[i], expected[i], 1e-8);
        // Π_x itself carries the same nonzero profile.
        const auto full = eigvalsh(pi_x(v));
        ASSERT_EQ(full.size(), 8u);
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(full[i], expected[i], 1e-8);
        for (std::size_t i = 4; i < 8; ++i) EXPECT_NEAR(full[i], 0.0, 1e-8);
        // Top-2 eigenspace is the planted W.
        const SubspaceBasis top(SubspaceBasis::trusted, 4, {e.vectors[0], e.vectors[1]});
        EXPECT_LE(frobenius_distance(projector(top), projector(w)), 1e-7);
    }
}

TEST(Planting, NoInstanceSamplingBound) {
    const auto inst = make_no_instance({2, 1, 1, 3, 8}, 4);
    const double top = inst.profile.eigenvalues.front();
    EXPECT_LE(top, 0.01);
    Rng rng(40);
    for (int s = 0; s < 200; ++s) EXPECT_LE(acceptance_probability(inst.spec, random_unit_vector(rng, 4)), 0.01 + 1e-8);
}

TEST(Planting, GeneratedInstancesMatchDeclaredProfile) {
    for (std::size_t d = 1; d <= 3; ++d) {
        const auto inst = make_yes_instance({2, 1, d, 3, 8}, 10 + d);
        const auto eig = eigvalsh(acceptance_operator(inst.spec));
        for (std::size_t i = 0; i < eig.size(); ++i) EXPECT_NEAR(eig[i], inst.profile.eigenvalues[i], 1e-8);
        EXPECT_EQ(inst.planted_basis.dim(), d);
    }
}

TEST(Planting, DeterministicInSeed) {
    const auto a = make_yes_instance({2, 1, 2, 3, 8}, 7);
    const auto b = make_yes_instance({2, 1, 2, 3, 8}, 7);
    const auto c = make_yes_instance({2, 1, 2, 3, 8}, 8);
    EXPECT_EQ(a.spec.unitary(), b.spec.unitary());
    EXPECT_FALSE(a.spec.unitary() == c.spec.unitary());
}

TEST(Planting, RejectsBadShapes) {
    Rng rng(1);
    const SubspaceBasis w = random_subspace(rng, 4, 1);
    const std::vector<double> acc{1.0}, bg2{0.0, 0.0}, bg3{0.0, 0.0, 0.0}, bad{1.5};
    EXPECT_THROW(plant_verifier(2, 1, w, acc, bg2, 0), std::invalid_argument);
    EXPECT_THROW(plant_verifier(2, 0, w, acc, bg3, 0), std::invalid_argument);
    EXPECT_THROW(plant_verifier(2, 1, w, bad, bg3, 0), std::invalid_argument);
    EXPECT_THROW(make_yes_instance({2, 1, 4, 3, 8}, 0), std::invalid_argument);
}

TEST(Classify, SpectrumExamples) {
    const Thresholds th{2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 3};
    const std::vector<double> one{1.0, 0.0, 0.0, 0.0};
    const auto a = classify_spectrum(one, th);
    EXPECT_EQ(a.verdict, Verdict::yes);
    EXPECT_EQ(a.d, 1u);

    const std::vector<double> gap{0.5, 0.2, 0.0, 0.0};
    const auto b = classify_spectrum(gap, th);
    EXPECT_EQ(b.verdict, Verdict::violation);
    ASSERT_EQ(b.offending.size(), 1u);
    EXPECT_EQ(b.offending[0], 0.5);

    const std::vector<double> low{0.3, 0.1, 0.0, 0.0};
    EXPECT_EQ(classify_spectrum(low, th).verdict, Verdict::no);

    const std::vector<double> too_many{0.9, 0.9, 0.9, 0.9};
    EXPECT_EQ(classify_spectrum(too_many, th).verdict, Verdict::violation);
}

TEST(Classify, PlantedTwoDimensionalInstance) {
    const auto v = planted_two_dim(3);
    const Thresholds th{2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 3};
    const auto c = classify(v, th);
    EXPECT_EQ(c.spectral.verdict, Verdict::yes);
    EXPECT_EQ(c.spectral.d, 2u);
    EXPECT_EQ(c.sampled, SampledVerdict::yes);
    EXPECT_LE(c.subspace_gap, 1e-8);
    EXPECT_TRUE(c.agree);
}

TEST(Classify, SpectralAndSampledAgreeOnPlantedInstances) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const PlantParams p{2, 1, 1 + seed % 3, 3, 8};
        for (const auto& inst : {make_yes_instance(p, seed), make_no_instance(p, seed)}) {
            const auto c = classify(inst.spec, inst.profile.thresholds, {50, seed, 1e-8});
            EXPECT_TRUE(c.agree) << to_string(inst.kind) << " seed " << seed;
            EXPECT_EQ(c.spectral.verdict, inst.kind == InstanceKind::yes ? Verdict::yes : Verdict::no);
        }
    }
}

TEST(Classify, ViolationSurfacesOffendingValue) {
    Rng rng(6);
    const SubspaceBasis w = random_subspace(rng, 4, 1);
    const std::vector<double> acc{0.5}, bg{0.1, 0.0, 0.0};
    const auto v = plant_verifier(2, 1, w, acc, bg, 6);
    const auto c = classify(v, {2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 3});
    EXPECT_EQ(c.spectral.verdict, Verdict::violation);
    ASSERT_EQ(c.spectral.offending.size(), 1u);
    EXPECT_NEAR(c.spectral.offending[0], 0.5, 1e-8);
    EXPECT_NE(c.sampled, SampledVerdict::yes);
}

TEST(Amplify, FixedPoints) {
    for (std::size_t n : {1u, 5u, 15u})
        for (std::size_t th = 0; th <= n; ++th) {
            EXPECT_DOUBLE_EQ(amplify_spectral(1.0, n, th), 1.0);
            if (th > 0) {
                EXPECT_DOUBLE_EQ(amplify_spectral(0.0, n, th), 0.0);
            }
        }
}

TEST(Amplify, ExactRationalTail) {
    // Σ_{j>=8} C(15,j) 2^j / 3^15, summed in integers.
    std::uint64_t num = 0, c = 1;
    for (std::uint64_t j = 0; j <= 15; ++j) {
        if (j > 0) c = c * (15 - j + 1) / j;
        if (j >= 8) num += c << j;
    }
    std::uint64_t den = 1;
    for (int i = 0; i < 15; ++i) den *= 3;
    const double exact = static_cast<double>(num) / static_cast<double>(den);
    const double got = amplify_spectral(2.0 / 3.0, 15, 8);
    EXPECT_NEAR(got, exact, 1e-14);
    EXPECT_GT(got, 0.85);
    EXPECT_EQ(majority_threshold(15), 8u);
    EXPECT_THROW(majority_threshold(14), std::invalid_argument);
}

TEST(Amplify, StrictlyMonotoneAndOrderPreserving) {
    Rng rng(5);
    std::vector<double> lambdas(50);
    for (auto& x : lambdas) x = rng.uniform();
    std::sort(lambdas.begin(), lambdas.end(), std::greater<>{});
    const auto out = amplify_spectral(lambdas, 15, 8);
    for (std::size_t i = 1; i < out.size(); ++i) EXPECT_GT(out[i - 1], out[i]);
}

TEST(Amplify, OperatorKeepsEigenvectors) {
    const auto v = planted_two_dim(9);
    const Matrix e = acceptance_operator(v);
    const Matrix amp = amplify_spectral(e, 15, 8);
    EXPECT_LE(frobenius_norm(commutator(e, amp)), 1e-10);
    const auto vals = eigvalsh(amp);
    EXPECT_NEAR(vals[0], amplify_spectral(0.99, 15, 8), 1e-10);
    EXPECT_NEAR(vals[2], amplify_spectral(0.01, 15, 8), 1e-10);
}

TEST(Amplify, ReplantedInstanceRealizesAmplifiedProfile) {
    // Start from a weak instance with accepted 0.8, background 0.2.
    Rng rng(31);
    const SubspaceBasis w = random_subspace(rng, 4, 2);
    const std::vector<double> acc{0.8, 0.75}, bg{0.2, 0.1};
    VerifierSpec v = plant_verifier(2, 1, w, acc, bg, 31);
    std::vector<double> profile{0.8, 0.75, 0.2, 0.1};
    const PlantedInstance weak{v, w, InstanceKind::yes, SpectralProfile(profile, Thresholds{2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 3})};
    const auto strong = amplify_instance(weak, 15, 8, Thresholds{0.85, 0.15, 0.15, 3}, 32);
    const auto eig = eigvalsh(acceptance_operator(strong.spec));
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(eig[i], amplify_spectral(profile[i], 15, 8), 1e-8);
    EXPECT_LE(frobenius_distance(projector(strong.planted_basis), projector(w)), 1e-7);
    EXPECT_EQ(strong.spec.k(), weak.spec.k());
}
