#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "fqma/linalg.hpp"

namespace fqma {

inline constexpr std::size_t kMaxPermDegree = 6;

inline std::size_t factorial(std::size_t n) {
    std::size_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

inline std::size_t int_pow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= base;
    return r;
}

/// A bijection of {0, ..., t-1}. images()[i] is the image of i.
class Permutation {
public:
    explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
        const int t = static_cast<int>(images_.size());
        std::vector<bool> seen(images_.size(), false);
        for (int x : images_) {
            if (x < 0 || x >= t || seen[static_cast<std::size_t>(x)])
                throw std::invalid_argument("Permutation: images are not a bijection");
            seen[static_cast<std::size_t>(x)] = true;
        }
        int inversions = 0;
        for (int i = 0; i < t; ++i)
            for (int j = i + 1; j < t; ++j)
                if (images_[i] > images_[j]) ++inversions;
        sign_ = (inversions % 2 == 0) ? 1 : -1;
    }

    static Permutation identity(std::size_t t) {
        std::vector<int> im(t);
        for (std::size_t i = 0; i < t; ++i) im[i] = static_cast<int>(i);
        return Permutation(std::move(im));
    }

    /// Transposition of positions i and j (0-based).
    static Permutation transposition(std::size_t t, std::size_t i, std::size_t j) {
        if (i >= t || j >= t || i == j) throw std::invalid_argument("Permutation::transposition: bad indices");
        auto p = identity(t).images_;
        std::swap(p[i], p[j]);
        return Permutation(std::move(p));
    }

    std::size_t degree() const noexcept { return images_.size(); }
    int sign() const noexcept { return sign_; }
    int operator()(std::size_t i) const { return images_.at(i); }
    const std::vector<int>& images() const noexcept { return images_; }

    Permutation inverse() const {
        std::vector<int> inv(images_.size());
        for (std::size_t i = 0; i < images_.size(); ++i) inv[static_cast<std::size_t>(images_[i])] = static_cast<int>(i);
        return Permutation(std::move(inv));
    }

    bool is_identity() const noexcept {
        for (std::size_t i = 0; i < images_.size(); ++i)
            if (images_[i] != static_cast<int>(i)) return false;
        return true;
    }

    friend bool operator==(const Permutation& a, const Permutation& b) { return a.images_ == b.images_; }

    friend std::ostream& operator<<(std::ostream& os, const Permutation& p) {
        os << '(';
        for (std::size_t i = 0; i < p.images_.size(); ++i) os << (i ? "," : "") << p.images_[i] + 1;
        return os << ')';
    }

private:
    std::vector<int> images_;
    int sign_ = 1;
};

inline int sign(const Permutation& p) noexcept { return p.sign(); }

/// (a ∘ b)(i) = a(b(i)).
inline Permutation compose(const Permutation& a, const Permutation& b) {
    if (a.degree() != b.degree()) throw std::invalid_argument("compose: permutations have different degree");
    std::vector<int> im(a.degree());
    for (std::size_t i = 0; i < im.size(); ++i) im[i] = a(static_cast<std::size_t>(b(i)));
    return Permutation(std::move(im));
}

inline void check_degree(std::size_t t) {
    if (t < 1 || t > kMaxPermDegree) throw std::out_of_range("permutation degree must lie in [1, 6]");
}

/// All t! permutations in lexicographic order of their image sequences.
inline std::vector<Permutation> enumerate(std::size_t t) {
    check_degree(t);
    std::vector<int> im(t);
    for (std::size_t i = 0; i < t; ++i) im[i] = static_cast<int>(i);
    std::vector<Permutation> out;
    out.reserve(factorial(t));
    do {
        out.emplace_back(im);
    } while (std::next_permutation(im.begin(), im.end()));
    return out;
}

/// Position of `p` in enumerate(p.degree()).
inline std::size_t perm_index(const Permutation& p) {
    const std::size_t t = p.degree();
    check_degree(t);
    std::size_t index = 0;
    for (std::size_t i = 0; i < t; ++i) {
        std::size_t smaller_later = 0;
        for (std::size_t j = i + 1; j < t; ++j)
            if (p(j) < p(i)) ++smaller_later;
        index += smaller_later * factorial(t - 1 - i);
    }
    return index;
}

/// Inverse of perm_index.
inline Permutation perm_from_index(std::size_t t, std::size_t index) {
    check_degree(t);
    if (index >= factorial(t)) throw std::out_of_range("perm_from_index: index out of range");
    std::vector<int> pool(t);
    for (std::size_t i = 0; i < t; ++i) pool[i] = static_cast<int>(i);
    std::vector<int> im;
    im.reserve(t);
    for (std::size_t i = 0; i < t; ++i) {
        const std::size_t f = factorial(t - 1 - i);
        const std::size_t pick = index / f;
        index %= f;
        im.push_back(pool[pick]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return Permutation(std::move(im));
}

/// Index of the basis state obtained by letting `p` move tensor factors:
/// the content of factor i lands in factor p(i). With this action
/// U_{a∘b} = U_a U_b.
inline std::size_t permute_basis_index(const Permutation& p, std::size_t index, std::size_t local_dim) {
    const std::size_t t = p.degree();
    std::size_t digits[kMaxPermDegree];
    for (std::size_t f = t; f-- > 0;) {
        digits[f] = index % local_dim;
        index /= local_dim;
    }
    std::size_t out_digits[kMaxPermDegree];
    for (std::size_t i = 0; i < t; ++i) out_digits[static_cast<std::size_t>(p(i))] = digits[i];
    std::size_t out = 0;
    for (std::size_t f = 0; f < t; ++f) out = out * local_dim + out_digits[f];
    return out;
}

inline void check_tensor_power(std::size_t local_dim, std::size_t t) {
    if (local_dim == 0) throw std::invalid_argument("local dimension must be positive");
    std::size_t d = 1;
    for (std::size_t i = 0; i < t; ++i) {
        d *= local_dim;
        if (d > kMaxAmbientDim) throw std::overflow_error("tensor power exceeds the 4096 ambient dimension cap");
    }
}

/// Applies U_p to a vector on (local_dim)^{⊗t} without forming the matrix.
inline Vector apply_permutation(const Permutation& p, std::span<const cplx> v, std::size_t local_dim) {
    const std::size_t dim = int_pow(local_dim, p.degree());
    if (v.size() != dim) throw std::invalid_argument("apply_permutation: vector dimension mismatch");
    Vector out(dim);
    for (std::size_t idx = 0; idx < dim; ++idx) out[permute_basis_index(p, idx, local_dim)] = v[idx];
    return out;
}

/// 0/1 matrix of U_p on (local_dim)^{⊗t}.
inline Matrix perm_unitary(const Permutation& p, std::size_t local_dim) {
    check_tensor_power(local_dim, p.degree());
    const std::size_t dim = int_pow(local_dim, p.degree());
    Matrix u(dim, dim);
    for (std::size_t idx = 0; idx < dim; ++idx) u(permute_basis_index(p, idx, local_dim), idx) = 1.0;
    return u;
}

}  // namespace fqma
