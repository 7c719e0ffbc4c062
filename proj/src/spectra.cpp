#include "symx/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace symx {

std::vector<std::pair<int, int>> Spectrum::clusters() const {
    std::vector<std::pair<int, int>> out;
    const double gap_tol = cluster_tol * spread();
    int start = 0;
    for (int i = 1; i <= int(values.size()); ++i) {
        if (i == int(values.size()) || values[i] - values[i - 1] > gap_tol) {
            out.emplace_back(start, i - start);
            start = i;
        }
    }
    return out;
}

std::vector<double> Spectrum::distinct_values() const {
    std::vector<double> out;
    for (auto [start, count] : clusters()) {
        double sum = 0;
        for (int i = 0; i < count; ++i) sum += values[start + i];
        out.push_back(sum / count);
    }
    return out;
}

double Spectrum::min_distinct_gap() const {
    const auto d = distinct_values();
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < d.size(); ++i) g = std::min(g, d[i] - d[i - 1]);
    return g;
}

namespace {

double frobenius(const RealMatrix& a) {
    double s = 0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

double off_diagonal_frobenius(const RealMatrix& a) {
    double s = 0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

} // namespace

EigenResult eig_symmetric(const RealMatrix& t, double tol, int max_sweeps) {
    const int n = t.order();
    require_finite(t);

    double asym = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = t(i, j) - t(j, i);
            asym += 2 * d * d;
        }
    asym = std::sqrt(asym);
    const double norm = frobenius(t);
    if (asym > 1e-10 * std::max(norm, 1e-300))
        throw NotSymmetricError("matrix asymmetry " + format_scalar(asym) +
                                " exceeds 1e-10 of its norm");

    // Work on the exactly symmetric average so rotations stay two-sided.
    RealMatrix s(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s(i, j) = 0.5 * (t(i, j) + t(j, i));
    RealMatrix v = RealMatrix::identity(n);

    int sweep = 0;
    while (off_diagonal_frobenius(s) > tol * std::max(norm, 1e-300)) {
        if (++sweep > max_sweeps)
            throw NoConvergenceError("no convergence after " + std::to_string(max_sweeps) + " sweeps");
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                const double apq = s(p, q);
                if (apq == 0.0) continue;
                const double theta = (s(q, q) - s(p, p)) / (2 * apq);
                const double tt = (theta >= 0 ? 1.0 : -1.0) /
                                  (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(tt * tt + 1);
                const double sn = tt * c;
                const double tau = sn / (1 + c);

                const double app = s(p, p), aqq = s(q, q);
                s(p, p) = app - tt * apq;
                s(q, q) = aqq + tt * apq;
                s(p, q) = s(q, p) = 0;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = s(i, p), aiq = s(i, q);
                    s(i, p) = s(p, i) = aip - sn * (aiq + tau * aip);
                    s(i, q) = s(q, i) = aiq + sn * (aip - tau * aiq);
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = vip - sn * (viq + tau * vip);
                    v(i, q) = viq + sn * (vip - tau * viq);
                }
            }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return s(a, a) < s(b, b); });

    EigenResult r;
    r.spectrum.source_order = n;
    r.spectrum.values.reserve(n);
    r.vectors = RealMatrix(n, n);
    for (int c = 0; c < n; ++c) {
        r.spectrum.values.push_back(s(order[c], order[c]));
        for (int i = 0; i < n; ++i) r.vectors(i, c) = v(i, order[c]);
    }

    for (int c = 0; c < n; ++c) {
        double rn = 0;
        for (int i = 0; i < n; ++i) {
            double acc = 0;
            for (int j = 0; j < n; ++j) acc += t(i, j) * r.vectors(j, c);
            acc -= r.spectrum.values[c] * r.vectors(i, c);
            rn += acc * acc;
        }
        r.residual_norm = std::max(r.residual_norm, std::sqrt(rn));
    }
    return r;
}

namespace {

SymmetrizableEigen eig_from_symmetrizer(const RealMatrix& a, const Symmetrizer<double>& d) {
    SymmetrizableEigen out;
    out.symmetrizer = d;
    out.symmetrized = symmetrize(a, d);

    const int n = a.order();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            out.symmetry_residual = std::max(
                out.symmetry_residual, std::abs(out.symmetrized(i, j) - out.symmetrized(j, i)));

    out.eigen = eig_symmetric(out.symmetrized);

    out.source_vectors = RealMatrix(n, n);
    for (int i = 0; i < n; ++i) {
        const double scale = 1 / std::sqrt(d.diag[i]);
        for (int c = 0; c < n; ++c) out.source_vectors(i, c) = scale * out.eigen.vectors(i, c);
    }
    return out;
}

} // namespace

SymmetrizableEigen eig_symmetrizable(const RealMatrix& a) {
    auto verdict = compute_symmetrizer(a);
    if (!verdict.symmetrizable())
        throw NotSymmetrizableError("matrix is not symmetrizable", verdict);
    return eig_from_symmetrizer(a, *verdict.symmetrizer());
}

SymmetrizableEigen eig_symmetrizable(const RationalMatrix& a) {
    auto verdict = compute_symmetrizer(a);
    if (!verdict.symmetrizable()) {
        SymmetrizabilityVerdict<double> vd = [&]() -> SymmetrizabilityVerdict<double> {
            if (auto* sv = verdict.sign_violation())
                return {SignViolation<double>{sv->i, sv->j, to_double(sv->a_ij), to_double(sv->a_ji)}};
            auto* cv = verdict.cycle_violation();
            return {CycleViolation<double>{cv->cycle, to_double(cv->forward_product),
                                           to_double(cv->backward_product)}};
        }();
        throw NotSymmetrizableError("matrix is not symmetrizable", vd);
    }
    return eig_from_symmetrizer(to_real(a), to_real(*verdict.symmetrizer()));
}

InterlacingCertificate check_interlacing(const Spectrum& parent, const Spectrum& child, double tol) {
    if (child.source_order != parent.source_order - 1 ||
        child.values.size() + 1 != parent.values.size())
        throw OrderMismatchError("child order must be parent order minus one");
    InterlacingCertificate cert;
    cert.parent = parent;
    cert.child = child;
    cert.tolerance = tol;
    cert.pass = true;
    for (std::size_t p = 0; p < child.values.size(); ++p) {
        const double lo = child.values[p] - parent.values[p];
        const double hi = parent.values[p + 1] - child.values[p];
        cert.slacks.emplace_back(lo, hi);
        if (lo < -tol || hi < -tol) cert.pass = false;
    }
    return cert;
}

std::vector<InterlacingCertificate> interlacing_all_deletions(const RealMatrix& a) {
    const int m = a.order();
    if (m < 2) throw OrderMismatchError("interlacing needs order >= 2");
    const SymmetrizableEigen parent = eig_symmetrizable(a);
    const double tol = 1e-8 * (parent.eigen.spectrum.spread() + 1);
    std::vector<InterlacingCertificate> certs;
    certs.reserve(m);
    for (int k = 1; k <= m; ++k) {
        const SymmetrizableEigen child = eig_symmetrizable(principal_submatrix(a, {k}));
        InterlacingCertificate cert =
            check_interlacing(parent.eigen.spectrum, child.eigen.spectrum, tol);
        cert.deleted_index = k;
        certs.push_back(std::move(cert));
    }
    return certs;
}

AlternationCertificate alternation_certificate(const RealMatrix& a, const Spectrum& spectrum, int k) {
    const int m = a.order();
    if (k < 1 || k > m) throw IndexOutOfRangeError("deleted index out of range");

    AlternationCertificate cert;
    cert.deleted_index = k;
    cert.threshold = 1e-8 * std::pow(std::max(max_abs(a), 1e-300), double(m - 1));
    cert.pass = true;

    const RealMatrix sub = principal_submatrix(a, {k});
    const auto clusters = spectrum.clusters();
    const auto reps = spectrum.distinct_values();
    for (std::size_t t = 0; t < reps.size(); ++t) {
        const double value = charpoly_eval(sub, reps[t]);
        cert.values.push_back(value);
        if (std::abs(value) <= cert.threshold) {
            cert.signs.push_back(0);
            cert.skipped.push_back(int(t) + 1);
            continue;
        }
        cert.signs.push_back(value > 0 ? 1 : -1);
        // Parity from the count of eigenvalues (with multiplicity) below.
        const int position = clusters[t].first + 1;
        const double expected = (position % 2 == 1) ? 1.0 : -1.0;
        if (value * expected <= 0) cert.pass = false;
    }
    return cert;
}

MinorSumReport minor_sum_identity(const RealMatrix& a, double lambda) {
    const int m = a.order();
    MinorSumReport r;
    if (m == 1) {
        r.minor_sum = 1;
        r.eigen_product = 1;  // empty product
        r.residual = 0;
        return r;
    }

    const SymmetrizableEigen eig = eig_symmetrizable(a);
    const Spectrum& sp = eig.eigen.spectrum;
    const auto clusters = sp.clusters();
    int home = -1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < clusters.size(); ++t) {
        const double rep = sp.values[clusters[t].first];
        if (std::abs(rep - lambda) < best) { best = std::abs(rep - lambda); home = int(t); }
    }
    if (clusters[home].second > 1)
        throw MultiplicityTooHighError("eigenvalue has multiplicity " +
                                       std::to_string(clusters[home].second));

    const RealMatrix shifted = minus_lambda_identity(a, lambda);
    double sum = 0, term_scale = 0;
    for (int k = 1; k <= m; ++k) {
        const double minor = det_bareiss(principal_submatrix(shifted, {k}));
        sum += minor;
        term_scale = std::max(term_scale, std::abs(minor));
    }
    double product = 1;
    for (int i = 0; i < m; ++i) {
        if (i >= clusters[home].first && i < clusters[home].first + clusters[home].second) continue;
        product *= sp.values[i] - lambda;
    }

    r.minor_sum = sum;
    r.eigen_product = product;
    r.residual = sum - product;
    r.scale = std::max({term_scale, std::abs(product), 1.0});
    return r;
}

std::pair<double, double> gershgorin_interval(const RealMatrix& a) {
    const int m = a.order();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int i = 0; i < m; ++i) {
        double radius = 0;
        for (int j = 0; j < m; ++j)
            if (j != i) radius += std::abs(a(i, j));
        lo = std::min(lo, a(i, i) - radius);
        hi = std::max(hi, a(i, i) + radius);
    }
    return {lo, hi};
}

std::vector<double> charpoly_roots_bisection(const RealMatrix& a, int scan_cells) {
    auto [lo, hi] = gershgorin_interval(a);
    if (lo == hi) { lo -= 1; hi += 1; }
    const double width_goal = 1e-12 * (hi - lo);
    auto p = [&](double x) { return charpoly_eval(a, x); };

    std::vector<double> roots;
    double prev_x = lo - 1e-6 * (hi - lo);
    double prev_v = p(prev_x);
    for (int c = 1; c <= scan_cells; ++c) {
        const double x = lo + (hi - lo) * (double(c) / scan_cells) +
                         (c == scan_cells ? 1e-6 * (hi - lo) : 0.0);
        const double v = p(x);
        if (prev_v == 0.0) {
            roots.push_back(prev_x);
        } else if (v != 0.0 && (prev_v < 0) != (v < 0)) {
            double va = prev_v, xa = prev_x, xb = x;
            while (xb - xa > width_goal) {
                const double mid = 0.5 * (xa + xb);
                const double vm = p(mid);
                if (vm == 0.0) { xa = xb = mid; break; }
                if ((va < 0) == (vm < 0)) { xa = mid; va = vm; }
                else xb = mid;
            }
            roots.push_back(0.5 * (xa + xb));
        }
        prev_x = x;
        prev_v = v;
    }
    return roots;
}

} // namespace symx
