#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "symx/matrix.hpp"

namespace symx {

/// Laplace expansion along the first row; test oracle, factorial cost.
template <class T>
T det_cofactor(const Matrix<T>& a) {
    const int m = a.order();
    if (m > 8) throw OrderTooLargeError("cofactor determinant limited to order 8");
    if (m == 1) return a(0, 0);
    T acc{};
    for (int j = 0; j < m; ++j) {
        if (a(0, j) == T(0)) continue;
        Matrix<T> minor(m - 1, m - 1);
        for (int r = 1; r < m; ++r) {
            int cc = 0;
            for (int c = 0; c < m; ++c) {
                if (c == j) continue;
                minor(r - 1, cc++) = a(r, c);
            }
        }
        const T term = a(0, j) * det_cofactor(minor);
        if (j % 2 == 0) acc += term; else acc -= term;
    }
    return acc;
}

/// Fraction-free elimination. Exact scalars pivot on the first nonzero
/// row; floats use partial pivoting with zero threshold 1e-13 * max|a_ij|.
template <class T>
T det_bareiss(const Matrix<T>& a) {
    const int m = a.order();
    Matrix<T> w = a;
    [[maybe_unused]] T zero_tol{};
    if constexpr (!is_exact_scalar_v<T>) zero_tol = 1e-13 * max_abs(a);

    bool negate = false;
    T prev = T(1);
    for (int k = 0; k + 1 < m; ++k) {
        int pivot_row = -1;
        if constexpr (is_exact_scalar_v<T>) {
            for (int r = k; r < m; ++r)
                if (w(r, k) != T(0)) { pivot_row = r; break; }
            if (pivot_row < 0) return T(0);
        } else {
            T best{};
            for (int r = k; r < m; ++r) {
                const T mag = abs_value(w(r, k));
                if (pivot_row < 0 || mag > best) { best = mag; pivot_row = r; }
            }
            if (best <= zero_tol) return T(0);
        }
        if (pivot_row != k) {
            for (int c = k; c < m; ++c) std::swap(w(k, c), w(pivot_row, c));
            negate = !negate;
        }
        const T pivot = w(k, k);
        for (int i = k + 1; i < m; ++i) {
            for (int j = k + 1; j < m; ++j)
                w(i, j) = (w(i, j) * pivot - w(i, k) * w(k, j)) / prev;
            w(i, k) = T(0);
        }
        prev = pivot;
    }
    return negate ? T(-w(m - 1, m - 1)) : w(m - 1, m - 1);
}

template <class T>
struct CondensationTrace {
    struct ZeroPivot {
        int layer;  // layer being divided by, 0-based into layers
        int i, j;   // 1-based position of the zero interior entry
    };
    std::vector<Matrix<T>> layers;  // orders m, m-1, ..., down to 1 when complete
    bool fallback_used = false;
    std::optional<ZeroPivot> fallback_reason;
};

template <class T>
struct DodgsonResult {
    T value{};
    CondensationTrace<T> trace;
};

/// Iterated condensation: every stage entry is a connected 2x2 minor of
/// the previous stage divided by the matching interior entry of the stage
/// before that. A zero divisor aborts into fraction-free elimination.
template <class T>
DodgsonResult<T> det_dodgson(const Matrix<T>& a) {
    const int m = a.order();
    DodgsonResult<T> out;
    out.trace.layers.push_back(a);
    if (m == 1) {
        out.value = a(0, 0);
        return out;
    }

    [[maybe_unused]] T zero_tol{};
    if constexpr (!is_exact_scalar_v<T>) zero_tol = 1e-13 * max_abs(a);
    auto divisor_is_zero = [&](const T& d) {
        if constexpr (is_exact_scalar_v<T>) return d == T(0);
        else return abs_value(d) <= zero_tol;
    };

    for (int t = 1; t < m; ++t) {
        const Matrix<T>& cur = out.trace.layers[t - 1];
        const int n = cur.order();
        Matrix<T> next(n - 1, n - 1);
        for (int i = 0; i + 1 < n; ++i) {
            for (int j = 0; j + 1 < n; ++j) {
                T num = cur(i, j) * cur(i + 1, j + 1) - cur(i, j + 1) * cur(i + 1, j);
                if (t >= 2) {
                    const T& div = out.trace.layers[t - 2](i + 1, j + 1);
                    if (divisor_is_zero(div)) {
                        out.trace.fallback_used = true;
                        out.trace.fallback_reason = {t - 2, i + 2, j + 2};
                        out.value = det_bareiss(a);
                        return out;
                    }
                    num /= div;
                }
                next(i, j) = std::move(num);
            }
        }
        out.trace.layers.push_back(std::move(next));
    }
    out.value = out.trace.layers.back()(0, 0);
    return out;
}

template <class T>
struct DodgsonIdentityReport {
    int k = 0, l = 0;
    T lhs{};       // det(A) * det(A with both pairs deleted)
    T rhs{};       // det(minor l) * det(minor k) - det(mixed lk) * det(mixed kl)
    T residual{};  // lhs - rhs, identically zero
    T scale{};     // largest product magnitude, for float tolerances
};

/// Checks the two-pair condensation identity at row-column pairs k != l.
template <class T>
DodgsonIdentityReport<T> verify_dodgson_identity(const Matrix<T>& a, int k, int l) {
    const int m = a.order();
    if (m <= 2) throw OrderMismatchError("identity requires order > 2");
    if (k == l) throw IndexOutOfRangeError("indices k and l must differ");
    if (k < 1 || k > m || l < 1 || l > m)
        throw IndexOutOfRangeError("index out of range 1.." + std::to_string(m));

    const T det_a      = det_bareiss(a);
    const T det_both   = det_bareiss(principal_submatrix(a, {k, l}));
    const T det_no_l   = det_bareiss(principal_submatrix(a, {l}));
    const T det_no_k   = det_bareiss(principal_submatrix(a, {k}));
    const T det_mix_lk = det_bareiss(mixed_submatrix(a, {{l}, {k}}));
    const T det_mix_kl = det_bareiss(mixed_submatrix(a, {{k}, {l}}));

    DodgsonIdentityReport<T> r;
    r.k = k;
    r.l = l;
    r.lhs = det_a * det_both;
    const T principal_prod = det_no_l * det_no_k;
    const T mixed_prod = det_mix_lk * det_mix_kl;
    r.rhs = principal_prod - mixed_prod;
    r.residual = r.lhs - r.rhs;
    r.scale = std::max({abs_value(r.lhs), abs_value(principal_prod), abs_value(mixed_prod)});
    return r;
}

/// det(A - lambda*I).
template <class T>
T charpoly_eval(const Matrix<T>& a, const T& lambda) {
    return det_bareiss(minus_lambda_identity(a, lambda));
}

template <class T>
struct LemmaReport {
    int k = 0, l = 0;
    T lambda{};
    T lhs{};       // a_lk * det(mixed minor rows!=l, cols!=k of A - lambda*I)
    T rhs{};       // a_kl * det(mixed minor rows!=k, cols!=l of A - lambda*I)
    T residual{};  // lhs - rhs, zero when A is symmetrizable
};

/// Cofactor symmetry check. The shift happens before deletion, so the
/// surviving row of index k and column of index l carry no lambda term.
template <class T>
LemmaReport<T> verify_cofactor_symmetry(const Matrix<T>& a, int k, int l, const T& lambda) {
    const int m = a.order();
    if (k == l) throw IndexOutOfRangeError("indices k and l must differ");
    if (k < 1 || k > m || l < 1 || l > m)
        throw IndexOutOfRangeError("index out of range 1.." + std::to_string(m));

    const Matrix<T> shifted = minus_lambda_identity(a, lambda);
    LemmaReport<T> r;
    r.k = k;
    r.l = l;
    r.lambda = lambda;
    r.lhs = a(l - 1, k - 1) * det_bareiss(mixed_submatrix(shifted, {{l}, {k}}));
    r.rhs = a(k - 1, l - 1) * det_bareiss(mixed_submatrix(shifted, {{k}, {l}}));
    r.residual = r.lhs - r.rhs;
    return r;
}

} // namespace symx
