// Exact dense matrices over a Field, reduced row-echelon form with kernel
// bases, Hermitian forms and form-adjoints.
#pragma once

#include <starlat/field.hpp>

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace starlat {

struct DimensionMismatch : std::runtime_error {
    DimensionMismatch() : std::runtime_error("matrix/vector dimension mismatch") {}
};
struct SingularMatrix : std::runtime_error {
    SingularMatrix() : std::runtime_error("matrix is singular") {}
};

using Vec = std::vector<Scalar>;

class Matrix {
public:
    Matrix() = default;
    Matrix(FieldPtr field, std::size_t rows, std::size_t cols)
        : field_(std::move(field)), rows_(rows), cols_(cols), e_(rows * cols, field_->zero()) {}

    static Matrix identity(const FieldPtr& f, std::size_t n) {
        Matrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = f->one();
        return m;
    }
    static Matrix from_rows(const FieldPtr& f, const std::vector<Vec>& rows) {
        if (rows.empty()) return Matrix(f, 0, 0);
        Matrix m(f, rows.size(), rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_) throw DimensionMismatch();
            for (std::size_t j = 0; j < m.cols_; ++j) m.at(i, j) = rows[i][j];
        }
        return m;
    }
    static Matrix from_ints(const FieldPtr& f, const std::vector<std::vector<long long>>& rows) {
        std::vector<Vec> v;
        for (const auto& r : rows) {
            Vec row;
            for (long long x : r) row.push_back(f->from_int(x));
            v.push_back(std::move(row));
        }
        return from_rows(f, v);
    }

    const FieldPtr& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Scalar& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const Scalar& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    Vec row(std::size_t i) const { return Vec(e_.begin() + i * cols_, e_.begin() + (i + 1) * cols_); }
    Vec col(std::size_t j) const {
        Vec v;
        v.reserve(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v.push_back(at(i, j));
        return v;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_zero() const {
        return std::all_of(e_.begin(), e_.end(), [&](const Scalar& s) { return field_->is_zero(s); });
    }

    Matrix operator+(const Matrix& o) const {
        check_same_shape(o);
        Matrix r = *this;
        for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = field_->add(e_[i], o.e_[i]);
        return r;
    }
    Matrix operator-(const Matrix& o) const {
        check_same_shape(o);
        Matrix r = *this;
        for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = field_->sub(e_[i], o.e_[i]);
        return r;
    }
    Matrix operator-() const {
        Matrix r = *this;
        for (auto& s : r.e_) s = field_->neg(s);
        return r;
    }
    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw DimensionMismatch();
        Matrix r(field_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Scalar& a = at(i, k);
                if (field_->is_zero(a)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r.at(i, j) = field_->add(r.at(i, j), field_->mul(a, o.at(k, j)));
            }
        return r;
    }
    Matrix scaled(const Scalar& c) const {
        Matrix r = *this;
        for (auto& s : r.e_) s = field_->mul(c, s);
        return r;
    }

    Matrix transpose() const {
        Matrix r(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }
    Matrix conj() const {
        Matrix r = *this;
        for (auto& s : r.e_) s = field_->conj(s);
        return r;
    }
    Matrix conj_transpose() const { return conj().transpose(); }

    Vec apply(const Vec& v) const {  // column-vector action
        if (v.size() != cols_) throw DimensionMismatch();
        Vec r(rows_, field_->zero());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                r[i] = field_->add(r[i], field_->mul(at(i, j), v[j]));
        return r;
    }

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            s += (i ? ";[" : "[");
            for (std::size_t j = 0; j < cols_; ++j) s += (j ? "," : "") + field_->to_string(at(i, j));
            s += "]";
        }
        return s + "]";
    }

    std::size_t hash() const {
        ScalarHash h;
        std::size_t r = rows_ * 1000003 + cols_;
        for (const auto& s : e_) r = r * 1000003 + h(s);
        return r;
    }

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch();
    }

    FieldPtr field_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Scalar> e_;
};

struct MatrixHash {
    std::size_t operator()(const Matrix& m) const { return m.hash(); }
};

struct RrefResult {
    Matrix R;
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
    Matrix kernel;  // rows span {v : Mv = 0}
};

/// Reduced row-echelon form via exact Gauss-Jordan. rank + kernel rows = cols.
inline RrefResult rref(const Matrix& m) {
    const FieldPtr& f = m.field();
    RrefResult out;
    out.R = m;
    Matrix& R = out.R;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
        std::size_t piv = r;
        while (piv < m.rows() && f->is_zero(R.at(piv, c))) ++piv;
        if (piv == m.rows()) continue;
        if (piv != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(R.at(piv, j), R.at(r, j));
        Scalar s = f->inv(R.at(r, c));
        for (std::size_t j = 0; j < m.cols(); ++j) R.at(r, j) = f->mul(s, R.at(r, j));
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || f->is_zero(R.at(i, c))) continue;
            Scalar t = R.at(i, c);
            for (std::size_t j = 0; j < m.cols(); ++j)
                R.at(i, j) = f->sub(R.at(i, j), f->mul(t, R.at(r, j)));
        }
        out.pivots.push_back(c);
        ++r;
    }
    out.rank = r;
    // kernel basis from free columns
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : out.pivots) is_pivot[c] = true;
    out.kernel = Matrix(f, m.cols() - out.rank, m.cols());
    std::size_t kr = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (is_pivot[c]) continue;
        out.kernel.at(kr, c) = f->one();
        for (std::size_t i = 0; i < out.rank; ++i)
            out.kernel.at(kr, out.pivots[i]) = f->neg(R.at(i, c));
        ++kr;
    }
    return out;
}

inline std::size_t rank(const Matrix& m) { return rref(m).rank; }

inline Matrix inverse(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch();
    const FieldPtr& f = m.field();
    std::size_t n = m.rows();
    Matrix aug(f, n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = f->one();
    }
    RrefResult rr = rref(aug);
    if (rr.rank < n || rr.pivots[n - 1] >= n) throw SingularMatrix();
    Matrix inv(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = rr.R.at(i, n + j);
    return inv;
}

/// Nondegenerate Hermitian form <v,w> = conj(v)^T H w, conjugate-linear in
/// the first argument and linear in the second.
class HermitianForm {
public:
    explicit HermitianForm(Matrix gram) : h_(std::move(gram)) {
        if (h_.rows() != h_.cols()) throw DimensionMismatch();
        if (h_.conj_transpose() != h_)
            throw std::runtime_error("Gram matrix is not Hermitian");
        hinv_ = inverse(h_);  // throws SingularMatrix when degenerate
    }
    static HermitianForm dot(const FieldPtr& f, std::size_t n) {
        return HermitianForm(Matrix::identity(f, n));
    }

    std::size_t dim() const { return h_.rows(); }
    const Matrix& gram() const { return h_; }
    const FieldPtr& field() const { return h_.field(); }

    Scalar value(const Vec& v, const Vec& w) const {
        if (v.size() != dim() || w.size() != dim()) throw DimensionMismatch();
        const FieldPtr& f = field();
        Vec hw = h_.apply(w);
        Scalar acc = f->zero();
        for (std::size_t i = 0; i < dim(); ++i)
            acc = f->add(acc, f->mul(f->conj(v[i]), hw[i]));
        return acc;
    }

    /// F* with <Fv,w> = <v,F*w>: F* = H^{-1} conj(F)^T H.
    Matrix adjoint(const Matrix& F) const {
        if (F.rows() != dim() || F.cols() != dim()) throw DimensionMismatch();
        return hinv_ * F.conj_transpose() * h_;
    }

private:
    Matrix h_, hinv_;
};

inline Scalar form_value(const HermitianForm& phi, const Vec& v, const Vec& w) {
    return phi.value(v, w);
}
inline Matrix adjoint_matrix(const HermitianForm& phi, const Matrix& F) { return phi.adjoint(F); }

/// Outcome of the anisotropy check: a form is anisotropic when <v,v> = 0
/// forces v = 0. method records how the verdict was reached.
struct AnisotropyCertificate {
    bool anisotropic = false;
    std::string method;          // "exhaustive scan", "minor positivity",
                                 // "box scan witness", "user override", "uncertified"
    std::optional<Vec> witness;  // nonzero isotropic vector when one was found
};

namespace detail {

// Sylvester criterion on the rational part of the Gram matrix. For
// quadratic extensions this needs conjugation with d < 0 and rational
// entries, since then <v,v> is a positive definite rational form in the
// coordinates of v.
inline bool gram_positive_definite(const HermitianForm& phi) {
    const FieldPtr& f = phi.field();
    const Matrix& H = phi.gram();
    std::size_t n = phi.dim();
    if (f->kind() == FieldKind::QuadExt) {
        if (f->quad_d() >= 0 || !f->has_nontrivial_involution()) return false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (f->quad_value(H.at(i, j)).b != 0) return false;
    }
    auto rat_of = [&](const Scalar& s) {
        return f->kind() == FieldKind::QuadExt ? f->quad_value(s).a : f->rat_value(s);
    };
    for (std::size_t m = 1; m <= n; ++m) {
        std::vector<std::vector<Rat>> a(m, std::vector<Rat>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) a[i][j] = rat_of(H.at(i, j));
        Rat det = 1;
        bool sign = false;
        for (std::size_t c = 0; c < m; ++c) {
            std::size_t p = c;
            while (p < m && a[p][c] == 0) ++p;
            if (p == m) return false;  // singular leading minor
            if (p != c) {
                std::swap(a[p], a[c]);
                sign = !sign;
            }
            det *= a[c][c];
            for (std::size_t i = c + 1; i < m; ++i) {
                Rat fac = a[i][c] / a[c][c];
                for (std::size_t j = c; j < m; ++j) a[i][j] -= fac * a[c][j];
            }
        }
        if (sign) det = -det;
        if (det <= 0) return false;
    }
    return true;
}

}  // namespace detail

/// Finite fields: exhaustive vector scan. Rationals and quadratic
/// extensions: minor positivity, then a small integer box scan for a
/// witness, then the explicit override.
inline AnisotropyCertificate certify_anisotropy(const HermitianForm& phi,
                                                bool assume_anisotropic = false) {
    const FieldPtr& f = phi.field();
    std::size_t n = phi.dim();
    if (f->finite()) {
        std::size_t q = f->size(), total = 1;
        for (std::size_t i = 0; i < n; ++i) {
            total *= q;
            if (total > (std::size_t(1) << 20))
                throw std::runtime_error("anisotropy scan too large");
        }
        for (std::size_t idx = 1; idx < total; ++idx) {
            Vec v;
            std::size_t x = idx;
            for (std::size_t i = 0; i < n; ++i, x /= q) v.push_back(f->element(x % q));
            if (f->is_zero(phi.value(v, v))) return {false, "exhaustive scan", v};
        }
        return {true, "exhaustive scan", std::nullopt};
    }
    if (detail::gram_positive_definite(phi)) return {true, "minor positivity", std::nullopt};
    long long side = 7, total = 1;  // entries in [-3, 3]
    for (std::size_t i = 0; i < n; ++i) total *= side;
    for (long long idx = 1; idx < total; ++idx) {
        Vec v;
        long long x = idx;
        for (std::size_t i = 0; i < n; ++i, x /= side) v.push_back(f->from_int(x % side - 3));
        if (f->is_zero(phi.value(v, v))) return {false, "box scan witness", v};
    }
    if (assume_anisotropic) return {true, "user override", std::nullopt};
    return {false, "uncertified", std::nullopt};
}

}  // namespace starlat
