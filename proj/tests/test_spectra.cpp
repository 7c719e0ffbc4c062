#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "symx/generators.hpp"
#include "symx/spectra.hpp"

using namespace symx;

namespace {

// Test-side root oracle: plain bisection on a sign-changing bracket.
double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((flo < 0) == (fm < 0)) { lo = mid; flo = fm; }
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

RealMatrix gen_real(std::uint64_t seed, int m, int magnitude = 4) {
    GenSpec spec;
    spec.order = m;
    spec.seed = seed;
    spec.magnitude = magnitude;
    return to_real(gen_symmetrizable_exact(spec));
}

} // namespace

TEST_CASE("jacobi eigensolver on worked matrices") {
    RealMatrix d{{3, 0, 0}, {0, 1, 0}, {0, 0, 2}};
    const auto r = eig_symmetric(d);
    CHECK(r.spectrum.values == std::vector<double>{1, 2, 3});

    RealMatrix s{{2, 1}, {1, 2}};
    const auto r2 = eig_symmetric(s);
    CHECK(r2.spectrum.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r2.spectrum.values[1] == doctest::Approx(3.0).epsilon(1e-12));

    RealMatrix tri{{2, 1, 0}, {1, 2, 1}, {0, 1, 2}};
    const auto r3 = eig_symmetric(tri);
    // Char poly (2-x)((2-x)^2 - 2); the outer roots bracket-bisect to 2 -+ sqrt(2).
    const auto p = [](double x) { return (2 - x) * ((2 - x) * (2 - x) - 2); };
    const double lo = bisect(p, 0.0, 1.0);
    const double hi = bisect(p, 3.0, 4.0);
    CHECK(lo == doctest::Approx(0.5857864376269049).epsilon(1e-12));
    CHECK(hi == doctest::Approx(3.4142135623730951).epsilon(1e-12));
    CHECK(r3.spectrum.values[0] == doctest::Approx(lo).epsilon(1e-10));
    CHECK(r3.spectrum.values[1] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(r3.spectrum.values[2] == doctest::Approx(hi).epsilon(1e-10));
    CHECK(r3.residual_norm <= 1e-10);
}

TEST_CASE("jacobi rejects asymmetric input and reports vectors orthonormal") {
    RealMatrix bad{{0, 2}, {1, 0}};
    CHECK_THROWS_AS(eig_symmetric(bad), NotSymmetricError);

    // Asymmetry below 1e-10 of the norm is accepted.
    RealMatrix nearly{{1.0, 0.5 + 1e-13}, {0.5, 1.0}};
    CHECK_NOTHROW(eig_symmetric(nearly));

    RealMatrix tri{{2, 1, 0}, {1, 2, 1}, {0, 1, 2}};
    CHECK_THROWS_AS(eig_symmetric(tri, 1e-12, 0), NoConvergenceError);

    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 2 + int(rng() % 7);
        const RealMatrix a = gen_real(rng(), m);
        const auto eig = eig_symmetrizable(a);
        const auto& v = eig.eigen.vectors;
        for (int c1 = 0; c1 < m; ++c1)
            for (int c2 = c1; c2 < m; ++c2) {
                double dot = 0;
                for (int i = 0; i < m; ++i) dot += v(i, c1) * v(i, c2);
                CHECK(std::abs(dot - (c1 == c2 ? 1.0 : 0.0)) <= 1e-10);
            }
    }
}

TEST_CASE("symmetrizable eigensolver on worked matrices") {
    RealMatrix two{{0, 2}, {1, 0}};
    const auto r = eig_symmetrizable(two);
    CHECK(r.eigen.spectrum.values[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r.eigen.spectrum.values[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    RealMatrix diag{{1, 0, 0}, {0, 2, 0}, {0, 0, 3}};
    CHECK(eig_symmetrizable(diag).eigen.spectrum.values == std::vector<double>{1, 2, 3});
}

TEST_CASE("zero-diagonal worked 3x3 spectrum matches the cubic roots") {
    // Roots of x^3 - 63x + 120, located by the test-side bisection oracle
    // and frozen; the eigenvalue sum must be 0 and the product -120.
    const auto p = [](double x) { return x * x * x - 63 * x + 120; };
    const double r1 = bisect(p, -10, -5);
    const double r2 = bisect(p, 0, 4);
    const double r3 = bisect(p, 5, 8);
    CHECK(r1 == doctest::Approx(-8.7579577783718197).epsilon(1e-13));
    CHECK(r2 == doctest::Approx(2.0393995115642817).epsilon(1e-13));
    CHECK(r3 == doctest::Approx(6.7185582668075380).epsilon(1e-13));

    const RealMatrix a = to_real(gen_paper_example<Rational>(0, 0, 0));
    const auto eig = eig_symmetrizable(a);
    REQUIRE(eig.eigen.spectrum.values.size() == 3);
    CHECK(eig.eigen.spectrum.values[0] == doctest::Approx(r1).epsilon(1e-10));
    CHECK(eig.eigen.spectrum.values[1] == doctest::Approx(r2).epsilon(1e-10));
    CHECK(eig.eigen.spectrum.values[2] == doctest::Approx(r3).epsilon(1e-10));
    const double sum = eig.eigen.spectrum.values[0] + eig.eigen.spectrum.values[1] +
                       eig.eigen.spectrum.values[2];
    const double prod = eig.eigen.spectrum.values[0] * eig.eigen.spectrum.values[1] *
                        eig.eigen.spectrum.values[2];
    CHECK(std::abs(sum) <= 1e-10);
    CHECK(prod == doctest::Approx(-120.0).epsilon(1e-10));
    CHECK(eig.symmetry_residual <= 1e-9 * max_abs(eig.symmetrized));
}

TEST_CASE("recovered source vectors are eigenvectors of the input") {
    std::mt19937_64 rng(57);
    for (int trial = 0; trial < 15; ++trial) {
        const int m = 2 + int(rng() % 6);
        const RealMatrix a = gen_real(rng(), m);
        const auto eig = eig_symmetrizable(a);
        const double scale = std::max(max_abs(a), 1.0);
        for (int c = 0; c < m; ++c) {
            for (int i = 0; i < m; ++i) {
                double acc = 0;
                for (int j = 0; j < m; ++j) acc += a(i, j) * eig.source_vectors(j, c);
                acc -= eig.eigen.spectrum.values[c] * eig.source_vectors(i, c);
                CHECK(std::abs(acc) <= 1e-8 * scale);
            }
        }
    }
}

TEST_CASE("non-symmetrizable input raises with the witness attached") {
    RealMatrix bad{{0, 1, 1}, {1, 0, 1}, {2, 1, 0}};
    try {
        eig_symmetrizable(bad);
        FAIL("expected NotSymmetrizableError");
    } catch (const NotSymmetrizableError& e) {
        REQUIRE(e.verdict().cycle_violation() != nullptr);
        CHECK(e.verdict().cycle_violation()->cycle == std::vector<int>{1, 2, 3});
    }
}

TEST_CASE("interlacing certificate on hand cases") {
    Spectrum parent{{1, 2, 3}, 1e-7, 3};
    Spectrum child_ok{{1.5, 2.5}, 1e-7, 2};
    const auto ok = check_interlacing(parent, child_ok, 1e-12);
    CHECK(ok.pass);
    double min_slack = 1e300;
    for (auto [lo, hi] : ok.slacks) min_slack = std::min({min_slack, lo, hi});
    CHECK(min_slack == doctest::Approx(0.5));

    Spectrum child_bad{{0.0, 2.5}, 1e-7, 2};
    const auto bad = check_interlacing(parent, child_bad, 1e-12);
    CHECK_FALSE(bad.pass);
    CHECK(bad.slacks[0].first == doctest::Approx(-1.0));

    Spectrum wrong_order{{1.0}, 1e-7, 1};
    CHECK_THROWS_AS(check_interlacing(parent, wrong_order, 1e-12), OrderMismatchError);
}

TEST_CASE("interlacing across all deletions on worked matrices") {
    RealMatrix tri{{2, 1, 0}, {1, 2, 1}, {0, 1, 2}};
    auto certs = interlacing_all_deletions(tri);
    REQUIRE(certs.size() == 3);
    for (const auto& c : certs) CHECK(c.pass);
    // Deleting index 3 leaves [[2,1],[1,2]] with child spectrum (1, 3).
    CHECK(certs[2].child.values[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(certs[2].child.values[1] == doctest::Approx(3.0).epsilon(1e-10));

    const RealMatrix p = to_real(gen_paper_example<Rational>(0, 0, 0));
    for (const auto& c : interlacing_all_deletions(p)) CHECK(c.pass);
    // Deleting index 3 of the worked family leaves ((0,-3),(-6,0)): +-sqrt(18).
    const auto paper_certs = interlacing_all_deletions(p);
    CHECK(paper_certs[2].child.values[0] == doctest::Approx(-std::sqrt(18.0)).epsilon(1e-10));
    CHECK(paper_certs[2].child.values[1] == doctest::Approx(std::sqrt(18.0)).epsilon(1e-10));

    RealMatrix two{{0, 2}, {1, 0}};
    const auto small = interlacing_all_deletions(two);
    REQUIRE(small.size() == 2);
    for (const auto& c : small) {
        CHECK(c.pass);
        CHECK(c.child.values[0] == doctest::Approx(0.0));
    }
}

TEST_CASE("alternation certificates on worked matrices") {
    RealMatrix tri{{2, 1, 0}, {1, 2, 1}, {0, 1, 2}};
    const auto eig = eig_symmetrizable(tri);
    const auto cert = alternation_certificate(tri, eig.eigen.spectrum, 3);
    REQUIRE(cert.values.size() == 3);
    CHECK(cert.values[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cert.values[1] == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(cert.values[2] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cert.signs == std::vector<int>{1, -1, 1});
    CHECK(cert.pass);
    CHECK(cert.skipped.empty());

    // Shared eigenvalues between parent and child are skipped, not failed.
    RealMatrix diag{{1, 0, 0}, {0, 2, 0}, {0, 0, 3}};
    const auto eigd = eig_symmetrizable(diag);
    const auto certd = alternation_certificate(diag, eigd.eigen.spectrum, 2);
    CHECK(certd.skipped == std::vector<int>{1, 3});
    CHECK(certd.signs == std::vector<int>{0, -1, 0});
    CHECK(certd.pass);

    RealMatrix two{{0, 2}, {1, 0}};
    const auto eig2 = eig_symmetrizable(two);
    const auto cert2 = alternation_certificate(two, eig2.eigen.spectrum, 2);
    CHECK(cert2.signs == std::vector<int>{1, -1});
    CHECK(cert2.pass);
}

TEST_CASE("alternation parity under a multiple eigenvalue") {
    // diag(1,1,3): the double eigenvalue zeroes the deleted charpoly and is
    // skipped; the expected sign at 3 comes from its position counted with
    // multiplicity.
    RealMatrix d{{1, 0, 0}, {0, 1, 0}, {0, 0, 3}};
    const auto eig = eig_symmetrizable(d);
    const auto cert = alternation_certificate(d, eig.eigen.spectrum, 3);
    REQUIRE(cert.values.size() == 2);
    CHECK(cert.skipped == std::vector<int>{1});
    CHECK(cert.signs[1] == 1);  // (1-3)^2 = 4 with two eigenvalues below
    CHECK(cert.pass);
}

TEST_CASE("minor sign uniformity") {
    RationalMatrix diag{{1, 0, 0}, {0, 2, 0}, {0, 0, 3}};
    const auto r = minor_sign_uniformity(diag, Rational(2));
    CHECK(r.minors == std::vector<Rational>{0, -1, 0});
    CHECK(r.zero_indices == std::vector<int>{1, 3});
    CHECK(r.uniform);

    RealMatrix tri{{2, 1, 0}, {1, 2, 1}, {0, 1, 2}};
    const auto rf = minor_sign_uniformity(tri, 2.0 - std::sqrt(2.0));
    CHECK(rf.uniform);
    for (int s : rf.signs) CHECK(s == 1);

    const RealMatrix p = to_real(gen_paper_example<Rational>(0, 0, 0));
    const auto eig = eig_symmetrizable(p);
    int parity = 1;
    for (double lambda : eig.eigen.spectrum.values) {
        const auto rp = minor_sign_uniformity(p, lambda);
        CHECK(rp.uniform);
        for (int s : rp.signs)
            if (s != 0) CHECK(s == parity);
        parity = -parity;
    }
}

TEST_CASE("minor sum identity") {
    RealMatrix diag{{1, 0, 0}, {0, 2, 0}, {0, 0, 3}};
    const auto r = minor_sum_identity(diag, 2.0);
    CHECK(r.minor_sum == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.eigen_product == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(std::abs(r.residual) <= 1e-8 * r.scale);

    RealMatrix tri{{2, 1, 0}, {1, 2, 1}, {0, 1, 2}};
    const auto rt = minor_sum_identity(tri, 2.0);
    CHECK(std::abs(rt.residual) <= 1e-8 * rt.scale);

    const RealMatrix p = to_real(gen_paper_example<Rational>(0, 0, 0));
    for (double lambda : eig_symmetrizable(p).eigen.spectrum.values)
        CHECK(std::abs(minor_sum_identity(p, lambda).residual) <=
              1e-8 * minor_sum_identity(p, lambda).scale);

    RealMatrix repeated{{1, 0, 0}, {0, 1, 0}, {0, 0, 3}};
    CHECK_THROWS_AS(minor_sum_identity(repeated, 1.0), MultiplicityTooHighError);
}

TEST_CASE("spectrum clustering") {
    Spectrum s{{1.0, 1.0 + 1e-12, 2.0, 3.0}, 1e-7, 4};
    const auto clusters = s.clusters();
    REQUIRE(clusters.size() == 3);
    CHECK(clusters[0] == std::pair<int, int>{0, 2});
    CHECK(s.distinct_values().size() == 3);

    Spectrum flat{{5.0, 5.0, 5.0}, 1e-7, 3};
    CHECK(flat.clusters().size() == 1);
}

TEST_CASE("realness and trace/determinant consistency on generated instances") {
    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 30; ++trial) {
        const int m = 3 + int(rng() % 8);
        const RealMatrix a = gen_real(rng(), m);
        const auto eig = eig_symmetrizable(a);
        REQUIRE(int(eig.eigen.spectrum.values.size()) == m);
        CHECK(eig.symmetry_residual <= 1e-9 * std::max(max_abs(eig.symmetrized), 1e-300));

        double sum = 0, prod = 1, scale = 1;
        for (double v : eig.eigen.spectrum.values) {
            sum += v;
            prod *= v;
            scale += std::abs(v);
        }
        CHECK(std::abs(sum - trace(a)) <= 1e-8 * scale);
        const double det = det_bareiss(a);
        CHECK(std::abs(prod - det) <= 1e-6 * std::max({std::abs(det), std::abs(prod), 1e-12}));
    }
}

TEST_CASE("interlacing holds for every deletion on generated instances") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 25; ++trial) {
        const int m = 3 + int(rng() % 8);
        const RealMatrix a = gen_real(rng(), m);
        for (const auto& cert : interlacing_all_deletions(a)) CHECK(cert.pass);
    }
}

TEST_CASE("alternation holds on separated spectra for every deletion") {
    std::mt19937_64 rng(54);
    int checked = 0;
    for (int trial = 0; trial < 25; ++trial) {
        const int m = 3 + int(rng() % 6);
        const RealMatrix a = gen_real(rng(), m);
        const auto eig = eig_symmetrizable(a);
        const auto& sp = eig.eigen.spectrum;
        if (sp.min_distinct_gap() <= 1e-6 * sp.spread()) continue;
        ++checked;
        for (int k = 1; k <= m; ++k) CHECK(alternation_certificate(a, sp, k).pass);
    }
    CHECK(checked > 0);
}

TEST_CASE("spectrum agrees with bisection roots of the characteristic polynomial") {
    std::mt19937_64 rng(55);
    int checked = 0;
    for (int trial = 0; trial < 12; ++trial) {
        const int m = 3 + int(rng() % 4);
        const RealMatrix a = gen_real(rng(), m);
        const auto eig = eig_symmetrizable(a);
        const auto& sp = eig.eigen.spectrum;
        if (sp.min_distinct_gap() <= 1e-4 * (sp.spread() + 1)) continue;
        ++checked;
        const auto roots = charpoly_roots_bisection(a);
        REQUIRE(int(roots.size()) == m);
        for (int i = 0; i < m; ++i)
            CHECK(std::abs(roots[i] - sp.values[i]) <= 1e-8 * (sp.spread() + 1));
    }
    CHECK(checked > 0);
}

TEST_CASE("condensation inequality from the realness induction") {
    // At an eigenvalue of the l-deleted submatrix, the full charpoly times
    // the doubly-deleted charpoly is nonpositive.
    std::mt19937_64 rng(56);
    int checked = 0;
    for (int trial = 0; trial < 15; ++trial) {
        const int m = 3 + int(rng() % 4);
        const RealMatrix a = gen_real(rng(), m);
        const auto eig = eig_symmetrizable(a);
        if (eig.eigen.spectrum.min_distinct_gap() <= 1e-6 * eig.eigen.spectrum.spread()) continue;
        for (int l = 1; l <= m; ++l) {
            const RealMatrix sub = principal_submatrix(a, {l});
            const auto child = eig_symmetrizable(sub);
            for (int k = 1; k <= m; ++k) {
                if (k == l) continue;
                for (double mu : child.eigen.spectrum.values) {
                    const double pm = charpoly_eval(a, mu);
                    const double inner = charpoly_eval(principal_submatrix(a, {k, l}), mu);
                    const double bound = 1e-8 * (std::abs(pm) * std::abs(inner) + 1);
                    CHECK(pm * inner <= bound);
                    ++checked;
                }
            }
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("gershgorin interval bounds the spectrum") {
    const RealMatrix p = to_real(gen_paper_example<Rational>(0, 0, 0));
    const auto [lo, hi] = gershgorin_interval(p);
    CHECK(lo == doctest::Approx(-15.0));
    CHECK(hi == doctest::Approx(15.0));
    for (double v : eig_symmetrizable(p).eigen.spectrum.values) {
        CHECK(v >= lo);
        CHECK(v <= hi);
    }
}
