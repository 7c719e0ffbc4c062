#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "symx/determinants.hpp"
#include "symx/matrix.hpp"
#include "symx/symmetrizability.hpp"

namespace symx {

/// Sorted real eigenvalues with multiplicity clustering.
struct Spectrum {
    std::vector<double> values;  // ascending
    double cluster_tol = 1e-7;   // relative to spread
    int source_order = 0;

    double spread() const { return values.empty() ? 0.0 : values.back() - values.front(); }

    /// Maximal runs whose consecutive gaps stay within cluster_tol*spread;
    /// each pair is (0-based start index, multiplicity).
    std::vector<std::pair<int, int>> clusters() const;

    /// One representative (cluster mean) per distinct eigenvalue.
    std::vector<double> distinct_values() const;

    /// Smallest gap between consecutive distinct eigenvalues.
    double min_distinct_gap() const;
};

struct EigenResult {
    Spectrum spectrum;
    Matrix<double> vectors;      // orthonormal columns for the symmetric input
    double residual_norm = 0.0;  // max_p |T v_p - lambda_p v_p|_2
};

/// Cyclic Jacobi rotations; input must be symmetric within 1e-10 of its
/// Frobenius norm. Converges when the off-diagonal Frobenius norm drops
/// below tol times the input norm.
EigenResult eig_symmetric(const RealMatrix& t, double tol = 1e-12, int max_sweeps = 50);

class NotSymmetrizableError : public SymxError {
public:
    NotSymmetrizableError(std::string msg, SymmetrizabilityVerdict<double> verdict)
        : SymxError(std::move(msg)), verdict_(std::move(verdict)) {}
    const SymmetrizabilityVerdict<double>& verdict() const { return verdict_; }

private:
    SymmetrizabilityVerdict<double> verdict_;
};

struct SymmetrizableEigen {
    Symmetrizer<double> symmetrizer;
    RealMatrix symmetrized;         // T = D^(1/2) A D^(-1/2), similar to the input
    double symmetry_residual = 0;   // max |t_ij - t_ji|
    EigenResult eigen;              // of T
    RealMatrix source_vectors;      // D^(-1/2) V, eigenvectors of the input
};

/// Real spectrum via the diagonal similarity route; throws
/// NotSymmetrizableError (carrying the witness) when no symmetrizer exists.
SymmetrizableEigen eig_symmetrizable(const RealMatrix& a);

/// Exact-regime entry: the symmetrizer is computed exactly, then both the
/// matrix and the diagonal are rounded once for the float eigensolver.
SymmetrizableEigen eig_symmetrizable(const RationalMatrix& a);

struct InterlacingCertificate {
    int deleted_index = 0;  // 1-based, 0 when the deletion is not tied to one index
    Spectrum parent;
    Spectrum child;
    // Per position p: (child_p - parent_p, parent_{p+1} - child_p).
    std::vector<std::pair<double, double>> slacks;
    double tolerance = 0;
    bool pass = false;
};

InterlacingCertificate check_interlacing(const Spectrum& parent, const Spectrum& child, double tol);

/// One certificate per deleted index 1..m, tolerance 1e-8*(spread+1).
std::vector<InterlacingCertificate> interlacing_all_deletions(const RealMatrix& a);

struct AlternationCertificate {
    int deleted_index = 0;
    std::vector<double> values;  // charpoly of the deleted submatrix at each distinct eigenvalue
    std::vector<int> signs;      // -1 / 0 / +1 per distinct eigenvalue
    std::vector<int> skipped;    // 1-based distinct positions below the degeneracy threshold
    double threshold = 0;
    bool pass = false;
};

/// Sign alternation of the deleted-index characteristic polynomial over
/// the distinct eigenvalues; the expected sign at a distinct eigenvalue is
/// determined by how many eigenvalues (with multiplicity) lie below it.
AlternationCertificate alternation_certificate(const RealMatrix& a, const Spectrum& spectrum, int k);

template <class T>
struct MinorSignReport {
    std::vector<T> minors;          // order m-1 principal minors of A - lambda*I, per deleted k
    std::vector<int> signs;         // -1 / 0 / +1 after degeneracy classification
    std::vector<int> zero_indices;  // 1-based k with |minor| at or below threshold
    T threshold{};
    bool uniform = false;           // all nonzero minors share one sign
};

/// All order m-1 principal minors of A - lambda*I must agree in sign at an
/// eigenvalue lambda; degenerate (zero) minors are listed separately.
template <class T>
MinorSignReport<T> minor_sign_uniformity(const Matrix<T>& a, const T& lambda) {
    const int m = a.order();
    const Matrix<T> shifted = minus_lambda_identity(a, lambda);
    MinorSignReport<T> r;
    if constexpr (!is_exact_scalar_v<T>) {
        r.threshold = 1e-8 * std::pow(std::max(max_abs(shifted), 1e-300), double(m - 1));
    }
    int seen_sign = 0;
    r.uniform = true;
    for (int k = 1; k <= m; ++k) {
        const T minor = m == 1 ? T(1) : det_bareiss(principal_submatrix(shifted, {k}));
        r.minors.push_back(minor);
        int sign;
        if (abs_value(minor) <= r.threshold) {
            sign = 0;
            r.zero_indices.push_back(k);
        } else {
            sign = minor > T(0) ? 1 : -1;
        }
        r.signs.push_back(sign);
        if (sign != 0) {
            if (seen_sign == 0) seen_sign = sign;
            else if (seen_sign != sign) r.uniform = false;
        }
    }
    return r;
}

struct MinorSumReport {
    double minor_sum = 0;      // sum of all order m-1 principal minors of A - lambda*I
    double eigen_product = 0;  // product of the nonzero eigenvalues of A - lambda*I
    double residual = 0;
    double scale = 1;
};

/// Elementary-symmetric identity at a simple eigenvalue: the minor sum
/// equals the product of the shifted matrix's nonzero eigenvalues.
MinorSumReport minor_sum_identity(const RealMatrix& a, double lambda);

/// Interval certain to contain every real eigenvalue (row discs).
std::pair<double, double> gershgorin_interval(const RealMatrix& a);

/// Sign-change scan of det(A - lambda*I) over the Gershgorin interval,
/// each bracket bisected to width 1e-12 * interval length. Independent of
/// the symmetrizer/Jacobi path; reliable for separated simple spectra.
std::vector<double> charpoly_roots_bisection(const RealMatrix& a, int scan_cells = 1 << 16);

} // namespace symx
