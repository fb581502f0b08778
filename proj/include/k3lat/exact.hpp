#pragma once

// Exact integer and rational linear algebra. Every entry is a GMP integer or
// rational; nothing in this layer touches floating point.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace k3lat {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

/// Raised when an argument violates a documented precondition.
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when an internal consistency check fails. Indicates a bug or
/// inconsistent ingested data rather than bad user input.
class InvariantError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

template <class T>
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ == 0 ? 0 : init.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto &row : init) {
            if (row.size() != cols_)
                throw InputError("ragged matrix literal");
            for (const auto &x : row)
                data_.push_back(x);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<T>> &rows, std::size_t cols) {
        Matrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols)
                throw InputError("ragged matrix rows");
            for (std::size_t j = 0; j < cols; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    T &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T &operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> row(std::size_t i) const {
        return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                              data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }
    std::vector<T> col(std::size_t j) const {
        std::vector<T> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            out[i] = (*this)(i, j);
        return out;
    }
    void set_row(std::size_t i, const std::vector<T> &v) {
        for (std::size_t j = 0; j < cols_; ++j)
            (*this)(i, j) = v[j];
    }
    void set_col(std::size_t j, const std::vector<T> &v) {
        for (std::size_t i = 0; i < rows_; ++i)
            (*this)(i, j) = v[i];
    }
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b)
            return;
        for (std::size_t j = 0; j < cols_; ++j)
            std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b)
            return;
        for (std::size_t i = 0; i < rows_; ++i)
            std::swap((*this)(i, a), (*this)(i, b));
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    /// Rows [r0, r0+nr) and columns [c0, c0+nc).
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Matrix out(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j)
                out(i, j) = (*this)(r0 + i, c0 + j);
        return out;
    }

    bool is_symmetric() const {
        if (!square())
            return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i))
                    return false;
        return true;
    }

    friend Matrix operator*(const Matrix &a, const Matrix &b) {
        if (a.cols_ != b.rows_)
            throw InputError("matrix product: dimension mismatch");
        Matrix c(a.rows_, b.cols_);
        T tmp;
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T &aik = a(i, k);
                if (aik == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    tmp = aik * b(k, j);
                    c(i, j) += tmp;
                }
            }
        return c;
    }
    friend Matrix operator+(const Matrix &a, const Matrix &b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw InputError("matrix sum: dimension mismatch");
        Matrix c = a;
        for (std::size_t i = 0; i < c.data_.size(); ++i)
            c.data_[i] += b.data_[i];
        return c;
    }
    friend Matrix operator-(const Matrix &a, const Matrix &b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw InputError("matrix difference: dimension mismatch");
        Matrix c = a;
        for (std::size_t i = 0; i < c.data_.size(); ++i)
            c.data_[i] -= b.data_[i];
        return c;
    }
    friend Matrix operator-(const Matrix &a) {
        Matrix c = a;
        for (auto &x : c.data_)
            x = -x;
        return c;
    }
    friend Matrix operator*(const T &s, const Matrix &a) {
        Matrix c = a;
        for (auto &x : c.data_)
            x *= s;
        return c;
    }
    friend bool operator==(const Matrix &a, const Matrix &b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix &a, const Matrix &b) { return !(a == b); }
    /// Lexicographic on (rows, cols, entries); lets matrices live in ordered sets.
    friend bool operator<(const Matrix &a, const Matrix &b) {
        if (a.rows_ != b.rows_)
            return a.rows_ < b.rows_;
        if (a.cols_ != b.cols_)
            return a.cols_ < b.cols_;
        return a.data_ < b.data_;
    }

    const std::vector<T> &data() const { return data_; }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

IntMatrix diagonal(const IntVector &d);
IntMatrix direct_sum(const IntMatrix &a, const IntMatrix &b);
RatMatrix to_rational(const IntMatrix &a);
/// Throws InputError when some entry is not an integer.
IntMatrix to_integer(const RatMatrix &a);
bool is_integral(const RatMatrix &a);

IntVector mat_vec(const IntMatrix &a, const IntVector &v);
RatVector mat_vec(const RatMatrix &a, const RatVector &v);
Integer dot(const IntVector &a, const IntVector &b);
/// aᵀ G b.
Integer bilinear(const IntMatrix &g, const IntVector &a, const IntVector &b);
Rational bilinear(const RatMatrix &g, const RatVector &a, const RatVector &b);
bool is_zero(const IntVector &v);

Integer determinant(const IntMatrix &a);
/// Throws InputError on a singular matrix.
RatMatrix inverse(const RatMatrix &a);
std::size_t rank(const IntMatrix &a);

struct SmithForm {
    IntMatrix S;
    IntMatrix U;
    IntMatrix V;
};

/// U·A·V = S with S diagonal, nonnegative, d₁ | d₂ | …, and U, V unimodular.
/// Pivots on the entry of smallest absolute value in the active block.
SmithForm smith_normal_form(const IntMatrix &a);

/// Invariant factors of A (the diagonal of S, including zeros).
IntVector invariant_factors(const IntMatrix &a);

struct HermiteForm {
    IntMatrix H; ///< row echelon form, pivots positive, entries above pivots reduced
    IntMatrix T; ///< unimodular, T·A = H
    std::size_t rank = 0;
};

HermiteForm hermite_normal_form(const IntMatrix &a);

/// Basis (as rows) of the Z-module spanned by the rows of A.
IntMatrix row_basis(const IntMatrix &a);

/// Rows form a basis of {v ∈ Zᵐ : v·A = 0}. The result is saturated.
IntMatrix integer_kernel(const IntMatrix &a);

/// Basis of (Q-span of rows of A) ∩ Zⁿ.
IntMatrix saturate(const IntMatrix &a);

struct Signature {
    std::size_t pos = 0;
    std::size_t neg = 0;
    friend bool operator==(const Signature &, const Signature &) = default;
};

/// Congruence diagonalization over Q. Throws InputError on degenerate or
/// non-symmetric input.
Signature signature(const IntMatrix &g);

struct LllResult {
    IntMatrix gram;  ///< B·G·Bᵀ
    IntMatrix basis; ///< rows: reduced basis in the original coordinates
};

/// LLL reduction (δ = 3/4) of a positive definite Gram matrix, in exact
/// rational arithmetic.
LllResult lll_reduce(const IntMatrix &gram);

/// num/den in lowest terms; den must be nonzero.
Rational make_rational(const Integer &num, const Integer &den);

/// Floor and ceiling of rationals; floor(sqrt(r)) for r ≥ 0.
Integer floor_q(const Rational &r);
Integer ceil_q(const Rational &r);
Integer isqrt_floor(const Rational &r);

/// Representative of r modulo m in [0, m).
Rational mod_q(const Rational &r, const Rational &m);

std::string to_string(const Integer &x);
std::string to_string(const Rational &x);
std::string to_string(const IntMatrix &a);
/// Parses "p" or "p/q".
Rational parse_rational(const std::string &s);

std::ostream &operator<<(std::ostream &os, const IntMatrix &a);

} // namespace k3lat
