#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

#include "symx/errors.hpp"
#include "symx/scalar.hpp"

namespace symx {

/// Dense row-major matrix. Element access is 0-based; the row/column
/// indices appearing in deletion sets, witnesses and reports are 1-based.
template <class T>
class Matrix {
public:
    Matrix() = default;

    Matrix(int rows, int cols, const T& fill = T{})
        : rows_(rows), cols_(cols), data_(std::size_t(rows) * std::size_t(cols), fill) {
        if (rows < 1 || cols < 1) throw SymxError("matrix dimensions must be positive");
    }

    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = int(init.size());
        if (rows_ == 0) throw SymxError("matrix dimensions must be positive");
        cols_ = int(init.begin()->size());
        data_.reserve(std::size_t(rows_) * std::size_t(cols_));
        for (const auto& row : init) {
            if (int(row.size()) != cols_) throw SymxError("ragged initializer rows");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    int order() const {
        if (!is_square()) throw NonSquareError("square matrix required");
        return rows_;
    }

    T& operator()(int i, int j) noexcept { return data_[std::size_t(i) * cols_ + j]; }
    const T& operator()(int i, int j) const noexcept { return data_[std::size_t(i) * cols_ + j]; }

    bool operator==(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
    }
    bool operator!=(const Matrix& other) const { return !(*this == other); }

    const std::vector<T>& data() const noexcept { return data_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;
using RealMatrix     = Matrix<double>;

template <class T>
T trace(const Matrix<T>& a) {
    T t{};
    for (int i = 0; i < a.order(); ++i) t += a(i, i);
    return t;
}

/// Largest entry magnitude.
template <class T>
T max_abs(const Matrix<T>& a) {
    T m{};
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            m = std::max(m, abs_value(a(i, j)));
    return m;
}

/// Induced infinity norm (largest absolute row sum).
template <class T>
T max_abs_row_sum(const Matrix<T>& a) {
    T m{};
    for (int i = 0; i < a.rows(); ++i) {
        T s{};
        for (int j = 0; j < a.cols(); ++j) s += abs_value(a(i, j));
        m = std::max(m, s);
    }
    return m;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
    Matrix<T> r(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
    return r;
}

/// A - lambda*I.
template <class T>
Matrix<T> minus_lambda_identity(const Matrix<T>& a, const T& lambda) {
    Matrix<T> r = a;
    for (int i = 0; i < a.order(); ++i) r(i, i) -= lambda;
    return r;
}

inline RealMatrix to_real(const RationalMatrix& a) {
    RealMatrix r(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r(i, j) = to_double(a(i, j));
    return r;
}

inline const RealMatrix& to_real(const RealMatrix& a) { return a; }

/// Row set / column set deletions for non-principal minors; indices 1-based.
struct IndexSelection {
    std::vector<int> excluded_rows;
    std::vector<int> excluded_cols;
};

namespace detail {

inline std::vector<int> checked_sorted_indices(std::vector<int> idx, int m, const char* what) {
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    for (int k : idx)
        if (k < 1 || k > m)
            throw IndexOutOfRangeError(std::string(what) + " index " + std::to_string(k) +
                                       " out of range 1.." + std::to_string(m));
    return idx;
}

inline std::vector<int> kept_indices(const std::vector<int>& excluded, int m) {
    std::vector<int> kept;
    kept.reserve(m - excluded.size());
    std::size_t e = 0;
    for (int i = 1; i <= m; ++i) {
        if (e < excluded.size() && excluded[e] == i) { ++e; continue; }
        kept.push_back(i);
    }
    return kept;
}

} // namespace detail

/// Deletes the listed row-column pairs (1-based); entry order preserved.
template <class T>
Matrix<T> principal_submatrix(const Matrix<T>& a, std::vector<int> deleted) {
    const int m = a.order();
    deleted = detail::checked_sorted_indices(std::move(deleted), m, "deleted");
    if (int(deleted.size()) == m)
        throw EmptyResultError("deleting every row-column pair leaves an empty matrix");
    const auto kept = detail::kept_indices(deleted, m);
    Matrix<T> r(int(kept.size()), int(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t j = 0; j < kept.size(); ++j)
            r(int(i), int(j)) = a(kept[i] - 1, kept[j] - 1);
    return r;
}

/// Deletes excluded_rows and excluded_cols independently (1-based).
template <class T>
Matrix<T> mixed_submatrix(const Matrix<T>& a, const IndexSelection& sel) {
    const int m = a.order();
    const auto rows = detail::checked_sorted_indices(sel.excluded_rows, m, "row");
    const auto cols = detail::checked_sorted_indices(sel.excluded_cols, m, "column");
    if (int(rows.size()) == m || int(cols.size()) == m)
        throw EmptyResultError("selection leaves an empty matrix");
    const auto kept_r = detail::kept_indices(rows, m);
    const auto kept_c = detail::kept_indices(cols, m);
    Matrix<T> r(int(kept_r.size()), int(kept_c.size()));
    for (std::size_t i = 0; i < kept_r.size(); ++i)
        for (std::size_t j = 0; j < kept_c.size(); ++j)
            r(int(i), int(j)) = a(kept_r[i] - 1, kept_c[j] - 1);
    return r;
}

/// Rejects NaN/Inf entries; exact matrices are always finite.
template <class T>
void require_finite(const Matrix<T>& a) {
    if constexpr (!is_exact_scalar_v<T>) {
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j)
                if (!std::isfinite(a(i, j)))
                    throw NonFiniteValueError("non-finite entry at (" + std::to_string(i + 1) +
                                              "," + std::to_string(j + 1) + ")");
    }
}

} // namespace symx
