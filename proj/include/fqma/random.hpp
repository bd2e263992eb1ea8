#pragma once

// Counter-based random streams. A stream is identified by (seed, stream id);
// draw n of a stream is splitmix64 of (key + n), so any draw can be
// reproduced without replaying the ones before it.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "fqma/linalg.hpp"

namespace fqma {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Per-trial seed derived from a master seed.
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master) ^ (index * 0xD6E8FEB86659FD93ULL + 0x632BE59BD9B4E019ULL));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept : key_(derive_seed(seed, stream)) {}

    std::uint64_t next_u64() noexcept { return splitmix64(key_ + 0x9E3779B97F4A7C15ULL * (counter_++)); }

    // Uniform in (0, 1).
    double uniform() noexcept { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    // Box-Muller; one draw of each pair is discarded to keep draws stateless.
    double gaussian() noexcept {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    cplx complex_gaussian() noexcept {
        const double re = gaussian();
        const double im = gaussian();
        return {re, im};
    }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

inline Vector random_vector(Rng& rng, std::size_t dim) {
    Vector v(dim);
    for (auto& x : v) x = rng.complex_gaussian();
    return v;
}

inline Vector random_unit_vector(Rng& rng, std::size_t dim) {
    Vector v = random_vector(rng, dim);
    const double n = norm(v);
    for (auto& x : v) x /= n;
    return v;
}

inline PureState random_state(Rng& rng, std::size_t dim) { return PureState(random_unit_vector(rng, dim)); }

inline PureState random_state(Rng& rng, std::vector<std::size_t> layout) {
    std::size_t dim = 1;
    for (auto f : layout) dim *= f;
    return PureState(random_unit_vector(rng, dim), std::move(layout));
}

// Random d-dimensional subspace of C^ambient (Gaussian columns orthonormalized).
inline SubspaceBasis random_subspace(Rng& rng, std::size_t ambient, std::size_t d) {
    if (d > ambient) throw std::invalid_argument("random_subspace: dimension exceeds ambient dimension");
    std::vector<Vector> vs;
    SubspaceBasis out(ambient);
    while (out.dim() < d) {
        vs.push_back(random_vector(rng, ambient));
        out = gram_schmidt(vs, ambient);
    }
    return out;
}

// Haar-like random unitary from Gram-Schmidt of Gaussian columns.
inline Matrix random_unitary(Rng& rng, std::size_t dim) {
    return random_subspace(rng, dim, dim).as_matrix();
}

inline Matrix random_hermitian(Rng& rng, std::size_t dim) {
    Matrix g(dim, dim);
    for (auto& x : g.entries()) x = rng.complex_gaussian();
    return (g + g.adjoint()) * cplx{0.5};
}

}  // namespace fqma
