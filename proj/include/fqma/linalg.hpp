#pragma once

// Dense complex linear algebra used throughout the library: matrices,
// states over tensor-factor layouts, orthonormal bases, a Hermitian
// eigensolver (backed by Eigen) and basic subspace calculus.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

namespace fqma {

using cplx = std::complex<double>;
using Vector = std::vector<cplx>;

// Tolerance tiers.
inline constexpr double kStructuralTol = 1e-9;
inline constexpr double kDerivedTol = 1e-8;
inline constexpr double kRankTol = 1e-7;

inline constexpr std::size_t kMaxAmbientDim = 4096;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_)
            throw std::invalid_argument("Matrix: entries length does not match rows x cols");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix from_columns(std::span<const Vector> columns, std::size_t rows) {
        Matrix m(rows, columns.size());
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (columns[j].size() != rows)
                throw std::invalid_argument("Matrix::from_columns: column length mismatch");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const cplx> entries() const noexcept { return data_; }
    std::span<cplx> entries() noexcept { return data_; }

    Vector column(std::size_t j) const {
        Vector v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void set_column(std::size_t j, std::span<const cplx> v) {
        if (v.size() != rows_) throw std::invalid_argument("Matrix::set_column: length mismatch");
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    Matrix adjoint() const {
        Matrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
        return out;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o, "operator+=");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o, "operator-=");
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Matrix& operator*=(cplx s) {
        for (auto& x : data_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, cplx s) { return a *= s; }
    friend Matrix operator*(cplx s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix product: inner dimension mismatch");
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            cplx* orow = &out.data_[i * b.cols_];
            for (std::size_t l = 0; l < a.cols_; ++l) {
                const cplx ail = a(i, l);
                if (ail == cplx{}) continue;
                const cplx* brow = &b.data_[l * b.cols_];
                for (std::size_t j = 0; j < b.cols_; ++j) orow[j] += ail * brow[j];
            }
        }
        return out;
    }

    friend Vector operator*(const Matrix& a, std::span<const cplx> v) {
        if (a.cols_ != v.size()) throw std::invalid_argument("Matrix-vector product: dimension mismatch");
        Vector out(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            cplx acc{};
            const cplx* row = &a.data_[i * a.cols_];
            for (std::size_t j = 0; j < a.cols_; ++j) acc += row[j] * v[j];
            out[i] = acc;
        }
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    void check_same_shape(const Matrix& o, const char* what) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument(std::string("Matrix ") + what + ": shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

using ComplexMatrix = Matrix;

// ---------------------------------------------------------------------------
// Vector helpers

inline cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw std::invalid_argument("inner: dimension mismatch");
    cplx acc{};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

inline double norm(std::span<const cplx> v) {
    double acc = 0.0;
    for (const auto& x : v) acc += std::norm(x);
    return std::sqrt(acc);
}

inline Vector scaled(std::span<const cplx> v, cplx s) {
    Vector out(v.begin(), v.end());
    for (auto& x : out) x *= s;
    return out;
}

inline Vector kron(std::span<const cplx> a, std::span<const cplx> b) {
    Vector out(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
    return out;
}

inline Vector basis_vector(std::size_t dim, std::size_t index) {
    Vector v(dim);
    v.at(index) = 1.0;
    return v;
}

// ---------------------------------------------------------------------------
// Matrix helpers

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return out;
}

inline Matrix kron_power(const Matrix& a, std::size_t t) {
    Matrix out = Matrix::identity(1);
    for (std::size_t i = 0; i < t; ++i) out = kron(out, a);
    return out;
}

inline double frobenius_norm(const Matrix& m) {
    double acc = 0.0;
    for (const auto& x : m.entries()) acc += std::norm(x);
    return std::sqrt(acc);
}

inline double frobenius_distance(const Matrix& a, const Matrix& b) { return frobenius_norm(a - b); }

inline cplx trace(const Matrix& m) {
    if (!m.square()) throw std::invalid_argument("trace: matrix is not square");
    cplx acc{};
    for (std::size_t i = 0; i < m.rows(); ++i) acc += m(i, i);
    return acc;
}

inline cplx expectation(const Matrix& m, std::span<const cplx> v) { return inner(v, m * v); }

inline Matrix outer(std::span<const cplx> a, std::span<const cplx> b) {
    Matrix out(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = a[i] * std::conj(b[j]);
    return out;
}

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

inline double hermiticity_residual(const Matrix& m) { return frobenius_distance(m, m.adjoint()); }

inline bool is_hermitian(const Matrix& m, double tol = kStructuralTol) {
    return m.square() && hermiticity_residual(m) <= tol;
}

inline bool is_unitary(const Matrix& m, double tol = kStructuralTol) {
    return m.square() && frobenius_distance(m.adjoint() * m, Matrix::identity(m.rows())) <= tol;
}

inline bool is_projector(const Matrix& m, double tol = kStructuralTol) {
    return is_hermitian(m, tol) && frobenius_distance(m * m, m) <= tol;
}

// Applies `op` to tensor factor `factor` of a vector laid out as the ordered
// product of `layout` dimensions (first factor most significant).
inline Vector apply_to_factor(std::span<const cplx> v, std::span<const std::size_t> layout,
                              std::size_t factor, const Matrix& op) {
    if (factor >= layout.size()) throw std::invalid_argument("apply_to_factor: factor out of range");
    const std::size_t dim = std::accumulate(layout.begin(), layout.end(), std::size_t{1}, std::multiplies<>{});
    if (dim != v.size()) throw std::invalid_argument("apply_to_factor: layout does not match vector");
    const std::size_t local = layout[factor];
    if (op.cols() != local || op.rows() != local)
        throw std::invalid_argument("apply_to_factor: operator does not match factor dimension");
    std::size_t inner_stride = 1;
    for (std::size_t f = factor + 1; f < layout.size(); ++f) inner_stride *= layout[f];
    const std::size_t outer_count = dim / (local * inner_stride);

    Vector out(dim);
    Vector slice(local);
    for (std::size_t o = 0; o < outer_count; ++o)
        for (std::size_t in = 0; in < inner_stride; ++in) {
            const std::size_t base = o * local * inner_stride + in;
            for (std::size_t a = 0; a < local; ++a) slice[a] = v[base + a * inner_stride];
            for (std::size_t a = 0; a < local; ++a) {
                cplx acc{};
                for (std::size_t b = 0; b < local; ++b) acc += op(a, b) * slice[b];
                out[base + a * inner_stride] = acc;
            }
        }
    return out;
}

// ---------------------------------------------------------------------------
// PureState

class PureState {
public:
    PureState(Vector amplitudes, std::vector<std::size_t> layout)
        : amplitudes_(std::move(amplitudes)), layout_(std::move(layout)) {
        const std::size_t prod =
            std::accumulate(layout_.begin(), layout_.end(), std::size_t{1}, std::multiplies<>{});
        if (prod != amplitudes_.size())
            throw std::invalid_argument("PureState: layout product does not equal dimension");
        if (std::abs(fqma::norm(amplitudes_) - 1.0) > kStructuralTol)
            throw std::invalid_argument("PureState: amplitudes are not unit norm");
    }

    explicit PureState(Vector amplitudes) : PureState(amplitudes, {amplitudes.size()}) {}

    // Normalizes `v`; throws if it is numerically zero.
    static PureState normalized(Vector v, std::vector<std::size_t> layout) {
        const double n = fqma::norm(v);
        if (n < kRankTol) throw std::invalid_argument("PureState::normalized: zero vector");
        for (auto& x : v) x /= n;
        return PureState(std::move(v), std::move(layout));
    }
    static PureState normalized(Vector v) {
        const std::size_t n = v.size();
        return normalized(std::move(v), {n});
    }

    std::size_t dim() const noexcept { return amplitudes_.size(); }
    const Vector& amplitudes() const noexcept { return amplitudes_; }
    const std::vector<std::size_t>& layout() const noexcept { return layout_; }

    // Overlap magnitude |<a|b>|, i.e. equality up to global phase when 1.
    friend double fidelity_amplitude(const PureState& a, const PureState& b) {
        return std::abs(inner(a.amplitudes_, b.amplitudes_));
    }

private:
    Vector amplitudes_;
    std::vector<std::size_t> layout_;
};

// ---------------------------------------------------------------------------
// SubspaceBasis

class SubspaceBasis {
public:
    struct trusted_t {};
    static constexpr trusted_t trusted{};

    explicit SubspaceBasis(std::size_t ambient_dim) : ambient_dim_(ambient_dim) {}

    SubspaceBasis(std::size_t ambient_dim, std::vector<Vector> vectors)
        : ambient_dim_(ambient_dim), vectors_(std::move(vectors)) {
        validate(kStructuralTol);
    }

    // Skips the orthonormality check; for results of routines that orthonormalize.
    SubspaceBasis(trusted_t, std::size_t ambient_dim, std::vector<Vector> vectors)
        : ambient_dim_(ambient_dim), vectors_(std::move(vectors)) {}

    std::size_t ambient_dim() const noexcept { return ambient_dim_; }
    std::size_t dim() const noexcept { return vectors_.size(); }
    bool empty() const noexcept { return vectors_.empty(); }
    const std::vector<Vector>& vectors() const noexcept { return vectors_; }
    const Vector& operator[](std::size_t i) const { return vectors_.at(i); }

    Matrix as_matrix() const { return Matrix::from_columns(vectors_, ambient_dim_); }

    void validate(double tol) const {
        for (std::size_t i = 0; i < vectors_.size(); ++i) {
            if (vectors_[i].size() != ambient_dim_)
                throw std::invalid_argument("SubspaceBasis: vector length differs from ambient dimension");
            if (std::abs(fqma::norm(vectors_[i]) - 1.0) > tol)
                throw std::invalid_argument("SubspaceBasis: vector is not unit norm");
            for (std::size_t j = 0; j < i; ++j)
                if (std::abs(inner(vectors_[j], vectors_[i])) > tol)
                    throw std::invalid_argument("SubspaceBasis: vectors are not orthogonal");
        }
    }

private:
    std::size_t ambient_dim_ = 0;
    std::vector<Vector> vectors_;
};

// ---------------------------------------------------------------------------
// Orthonormalization

namespace detail {

// Two passes of modified Gram-Schmidt against `basis`; returns the residual.
inline Vector orthogonalize_against(Vector v, const std::vector<Vector>& basis) {
    for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) {
            const cplx c = inner(b, v);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
        }
    return v;
}

}  // namespace detail

// Orthonormal basis of span(vs). Vectors whose residual after projecting out
// the running basis has norm below `tol` are dropped.
inline SubspaceBasis gram_schmidt(std::span<const Vector> vs, std::size_t ambient_dim, double tol = kRankTol) {
    std::vector<Vector> basis;
    for (const auto& v : vs) {
        if (v.size() != ambient_dim) throw std::invalid_argument("gram_schmidt: vector length mismatch");
        Vector r = detail::orthogonalize_against(v, basis);
        const double n = norm(r);
        if (n < tol) continue;
        for (auto& x : r) x /= n;
        basis.push_back(std::move(r));
    }
    return SubspaceBasis(SubspaceBasis::trusted, ambient_dim, std::move(basis));
}

inline SubspaceBasis gram_schmidt(std::span<const Vector> vs) {
    return gram_schmidt(vs, vs.empty() ? 0 : vs.front().size());
}

inline Matrix projector(const SubspaceBasis& b) {
    const std::size_t n = b.ambient_dim();
    Matrix p(n, n);
    for (const auto& v : b.vectors())
        for (std::size_t i = 0; i < n; ++i) {
            if (v[i] == cplx{}) continue;
            for (std::size_t j = 0; j < n; ++j) p(i, j) += v[i] * std::conj(v[j]);
        }
    return p;
}

inline SubspaceBasis orth_complement(const SubspaceBasis& b) {
    const std::size_t n = b.ambient_dim();
    std::vector<Vector> basis = b.vectors();
    const std::size_t target = n - b.dim();
    std::vector<Vector> out;
    for (std::size_t e = 0; e < n && out.size() < target; ++e) {
        Vector r = detail::orthogonalize_against(basis_vector(n, e), basis);
        const double nr = norm(r);
        // Some standard basis vector always keeps residual >= 1/sqrt(n) while
        // the running span is a proper subspace.
        if (nr < 0.5 / std::sqrt(static_cast<double>(n))) continue;
        for (auto& x : r) x /= nr;
        basis.push_back(r);
        out.push_back(std::move(r));
    }
    if (out.size() != target) throw std::logic_error("orth_complement: failed to reach full rank");
    return SubspaceBasis(SubspaceBasis::trusted, n, std::move(out));
}

// Span of the union of two subspaces (the non-orthogonal direct sum S1 + S2).
inline SubspaceBasis span_sum(const SubspaceBasis& a, const SubspaceBasis& b, double tol = kRankTol) {
    if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("span_sum: ambient dimension mismatch");
    std::vector<Vector> all = a.vectors();
    all.insert(all.end(), b.vectors().begin(), b.vectors().end());
    return gram_schmidt(all, a.ambient_dim(), tol);
}

// Orthonormal basis of the part of `outer_space` orthogonal to `inner_space`.
inline SubspaceBasis relative_complement(const SubspaceBasis& inner_space, const SubspaceBasis& outer_space,
                                         double tol = kRankTol) {
    if (inner_space.ambient_dim() != outer_space.ambient_dim())
        throw std::invalid_argument("relative_complement: ambient dimension mismatch");
    std::vector<Vector> residuals;
    residuals.reserve(outer_space.dim());
    for (const auto& v : outer_space.vectors())
        residuals.push_back(detail::orthogonalize_against(v, inner_space.vectors()));
    return gram_schmidt(residuals, outer_space.ambient_dim(), tol);
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition

struct EighResult {
    std::vector<double> values;  // descending
    SubspaceBasis vectors;       // column i pairs with values[i]
};

/// Hermitian eigendecomposition (Eigen's tridiagonal QR), eigenvalues descending.
/// Rejects input whose Hermiticity residual exceeds `hermitian_tol`.
inline EighResult eigh(const Matrix& h, double hermitian_tol = kStructuralTol) {
    if (!h.square()) throw std::invalid_argument("eigh: matrix is not square");
    if (hermiticity_residual(h) > hermitian_tol) throw std::invalid_argument("eigh: matrix is not Hermitian");
    const std::size_t n = h.rows();
    const auto ni = static_cast<Eigen::Index>(n);

    Eigen::MatrixXcd a(ni, ni);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 0.5 * (h(i, j) + std::conj(h(j, i)));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigh: eigensolver did not converge");

    // Eigen returns ascending order; reverse, keeping ties in a fixed order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto& vals = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return vals(static_cast<Eigen::Index>(i)) > vals(static_cast<Eigen::Index>(j));
    });

    EighResult res{{}, SubspaceBasis(n)};
    res.values.reserve(n);
    std::vector<Vector> cols;
    cols.reserve(n);
    const auto& vecs = solver.eigenvectors();
    for (std::size_t idx : order) {
        const auto c = static_cast<Eigen::Index>(idx);
        res.values.push_back(vals(c));
        Vector col(n);
        for (std::size_t r = 0; r < n; ++r) col[r] = vecs(static_cast<Eigen::Index>(r), c);
        cols.push_back(std::move(col));
    }
    res.vectors = SubspaceBasis(SubspaceBasis::trusted, n, std::move(cols));
    return res;
}

inline std::vector<double> eigvalsh(const Matrix& h) { return eigh(h).values; }

inline Matrix reconstruct(const EighResult& e) {
    const std::size_t n = e.vectors.ambient_dim();
    Matrix out(n, n);
    for (std::size_t i = 0; i < e.values.size(); ++i) out += outer(e.vectors[i], e.vectors[i]) * cplx{e.values[i]};
    return out;
}

// Basis of the intersection A ∩ B: directions whose cross-Gram singular value
// is within `tol` of 1.
inline SubspaceBasis intersect(const SubspaceBasis& a, const SubspaceBasis& b, double tol = kRankTol) {
    if (a.ambient_dim() != b.ambient_dim()) throw std::invalid_argument("intersect: ambient dimension mismatch");
    const std::size_t n = a.ambient_dim();
    if (a.empty() || b.empty()) return SubspaceBasis(n);
    const bool a_small = a.dim() <= b.dim();
    const SubspaceBasis& small = a_small ? a : b;
    const SubspaceBasis& large = a_small ? b : a;

    // G = S^dagger L, then eigen-decompose G G^dagger (small x small).
    Matrix g(small.dim(), large.dim());
    for (std::size_t i = 0; i < small.dim(); ++i)
        for (std::size_t j = 0; j < large.dim(); ++j) g(i, j) = inner(small[i], large[j]);
    const EighResult e = eigh(g * g.adjoint());

    std::vector<Vector> dirs;
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        const double sigma = std::sqrt(std::max(0.0, e.values[i]));
        if (1.0 - sigma > tol) break;  // values are sorted descending
        Vector x(n);
        for (std::size_t c = 0; c < small.dim(); ++c) {
            const cplx coef = e.vectors[i][c];
            for (std::size_t r = 0; r < n; ++r) x[r] += coef * small[c][r];
        }
        dirs.push_back(std::move(x));
    }
    return gram_schmidt(dirs, n, tol);
}

// ---------------------------------------------------------------------------
// Unitary completion

struct AssignedColumn {
    std::size_t position;
    Vector column;
};

// Unitary whose assigned columns are copied verbatim; the remaining columns
// are an orthonormal completion drawn from the standard basis.
inline Matrix complete_unitary(std::span<const AssignedColumn> partial, std::size_t dim) {
    std::vector<bool> taken(dim, false);
    std::vector<Vector> used;
    for (const auto& col : partial) {
        if (col.position >= dim) throw std::invalid_argument("complete_unitary: column position out of range");
        if (taken[col.position]) throw std::invalid_argument("complete_unitary: duplicate column position");
        if (col.column.size() != dim) throw std::invalid_argument("complete_unitary: column length mismatch");
        taken[col.position] = true;
        used.push_back(col.column);
    }
    // Throws on non-orthonormal input.
    try {
        SubspaceBasis check(dim, used);
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("complete_unitary: assigned columns are not orthonormal");
    }

    const SubspaceBasis fill = orth_complement(SubspaceBasis(SubspaceBasis::trusted, dim, used));
    Matrix u(dim, dim);
    for (const auto& col : partial) u.set_column(col.position, col.column);
    std::size_t next = 0;
    for (std::size_t j = 0; j < dim; ++j) {
        if (taken[j]) continue;
        u.set_column(j, fill[next++]);
    }
    return u;
}

}  // namespace fqma
