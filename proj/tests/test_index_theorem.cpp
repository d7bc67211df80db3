#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "ks/index_theorem.hpp"
#include "ks/rng.hpp"
#include "support/oracles.hpp"

using namespace ks;

namespace {

// Eigenvalue branch of J(s) nearest zero, tracked by magnitude; the
// finite-difference oracle for lambda0'.
double lambda0_finite_difference(const JacobianParts& parts, double h) {
    auto nearest_zero = [](const std::vector<std::complex<double>>& eig) {
        std::complex<double> best = eig.front();
        for (const auto& lam : eig)
            if (std::abs(lam) < std::abs(best)) best = lam;
        return best;
    };
    const auto plus = nearest_zero(eigenvalues(parts.homotopy_matrix(1.0 + h)));
    const auto minus = nearest_zero(eigenvalues(parts.homotopy_matrix(1.0 - h)));
    return (plus.real() - minus.real()) / (2.0 * h);
}

}  // namespace

TEST_CASE("quadratic coefficients at the origin: P(s) = 1 - s") {
    for (int n : {2, 3, 5}) {
        for (double alpha : {0.0, 0.3, 1.2, -0.7}) {
            const Configuration origin(std::vector<double>(static_cast<size_t>(n), 0.0));
            const QuadraticCoeffs q = quadratic_coeffs(jacobian(origin, ModelParams(alpha)));
            CHECK(q.c0 == 1.0);
            CHECK(q.c1 == doctest::Approx(-1.0).epsilon(1e-12));
            CHECK(std::abs(q.c2) < 1e-12);
        }
    }
}

TEST_CASE("s = 1 is a root of P for random configurations") {
    SplitMix64 rng(31);
    int checked = 0;
    while (checked < 500) {
        const int n = 2 + static_cast<int>(rng.below(6));
        const ModelParams params(rng.uniform(-1.4, 1.4));
        const JacobianParts parts = jacobian(Configuration(test::random_angles(n, rng)), params);
        try {
            const QuadraticCoeffs q = quadratic_coeffs(parts);
            CHECK(std::abs(q.c0 + q.c1 + q.c2) < 1e-9);
            ++checked;
        } catch (const SingularDiagonal&) {
            // vanishing diagonal entry; skip
        }
    }
}

TEST_CASE("minor expansion of c1, c2 equals the inner-product form") {
    SplitMix64 rng(39);
    int checked = 0;
    while (checked < 200) {
        const int n = 2 + static_cast<int>(rng.below(5));
        const JacobianParts parts = jacobian(Configuration(test::random_angles(n, rng)),
                                             ModelParams(rng.uniform(-1.4, 1.4)));
        double dmin = 1e30;
        for (double d : parts.diag) dmin = std::min(dmin, std::abs(d));
        if (dmin < 1e-2) continue;  // compare only where the naive form is accurate
        auto weighted = [&](const std::vector<double>& a, const std::vector<double>& b) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                s += a[static_cast<size_t>(i)] * b[static_cast<size_t>(i)] / parts.diag[static_cast<size_t>(i)];
            return s;
        };
        const double vdu = weighted(parts.v, parts.u);
        const double zdw = weighted(parts.z, parts.w);
        const double zdu = weighted(parts.z, parts.u);
        const double vdw = weighted(parts.v, parts.w);
        const QuadraticCoeffs q = quadratic_coeffs(parts);
        CHECK(q.c1 == doctest::Approx(vdu + zdw).epsilon(1e-10));
        CHECK(q.c2 == doctest::Approx(vdu * zdw - zdu * vdw).epsilon(1e-8));
        ++checked;
    }
}

TEST_CASE("determinant identity against the LU oracle") {
    SplitMix64 rng(32);
    const double svals[4] = {0.0, 0.3, 0.7, 1.2};
    int checked = 0;
    while (checked < 300) {
        const int n = 2 + static_cast<int>(rng.below(5));
        const ModelParams params(rng.uniform(-1.4, 1.4));
        const JacobianParts parts = jacobian(Configuration(test::random_angles(n, rng)), params);
        QuadraticCoeffs q;
        try {
            q = quadratic_coeffs(parts);
        } catch (const SingularDiagonal&) {
            continue;
        }
        double det_diag = 1.0;
        for (double d : parts.diag) det_diag *= d;
        for (double s : svals) {
            const double det_js = LuDecomposition::compute(parts.homotopy_matrix(s)).determinant();
            CHECK(std::abs(q.eval(s) * det_diag - det_js) <= 1e-8 * std::abs(det_diag));
        }
        ++checked;
    }
}

TEST_CASE("spec example: n = 4, alpha = pi/6 determinant identity") {
    SplitMix64 rng(33);
    const ModelParams params(pi / 6.0);
    for (int trial = 0; trial < 50; ++trial) {
        const JacobianParts parts = jacobian(Configuration(test::random_angles(4, rng)), params);
        QuadraticCoeffs q;
        try {
            q = quadratic_coeffs(parts);
        } catch (const SingularDiagonal&) {
            continue;
        }
        double det_diag = 1.0;
        for (double d : parts.diag) det_diag *= d;
        for (double s : {0.0, 0.3, 0.7, 1.2}) {
            const double det_js = LuDecomposition::compute(parts.homotopy_matrix(s)).determinant();
            CHECK(std::abs(q.eval(s) * det_diag - det_js) <= 1e-8 * std::abs(det_diag));
        }
    }
}

TEST_CASE("quadratic_coeffs rejects a singular diagonal") {
    // The alpha = 0 twist state has d identically zero.
    const Configuration twist({0.0, two_pi / 3.0, 2.0 * two_pi / 3.0});
    CHECK_THROWS_AS(quadratic_coeffs(jacobian(twist, ModelParams(0.0))), SingularDiagonal);
}

TEST_CASE("root counting in the open unit interval") {
    {
        // Origin case: single root exactly at 1, excluded by the guard.
        const RootCount rc = count_roots_in_unit_interval(1.0, -1.0, 0.0);
        CHECK(rc.n_in_unit_interval == 0);
        CHECK(rc.endpoint_root);
        CHECK_FALSE(rc.double_root);
    }
    {
        // (1 - s)(1 - 2s): roots 1/2 and 1.
        const RootCount rc = count_roots_in_unit_interval(1.0, -3.0, 2.0);
        CHECK(rc.n_in_unit_interval == 1);
        CHECK(rc.endpoint_root);
        REQUIRE(rc.roots.size() == 2);
    }
    {
        // (1 - s)^2: double root at 1.
        const RootCount rc = count_roots_in_unit_interval(1.0, -2.0, 1.0);
        CHECK(rc.n_in_unit_interval == 0);
        CHECK(rc.double_root);
    }
    {
        // Roots 1/4 and 1/2 both interior: c2 (s-1/4)(s-1/2) with c2 = 8.
        const RootCount rc = count_roots_in_unit_interval(1.0, -6.0, 8.0);
        CHECK(rc.n_in_unit_interval == 2);
    }
    {
        // Interior double root (1 - 2s)^2: counted with multiplicity, flagged.
        const RootCount rc = count_roots_in_unit_interval(1.0, -4.0, 4.0);
        CHECK(rc.n_in_unit_interval == 2);
        CHECK(rc.double_root);
    }
    {
        // No real roots.
        const RootCount rc = count_roots_in_unit_interval(1.0, 0.0, 1.0);
        CHECK(rc.complex_roots);
        CHECK(rc.n_in_unit_interval == 0);
    }
}

TEST_CASE("lambda0' at the origin equals n cos(alpha)") {
    for (int n : {2, 3, 4, 6}) {
        for (double alpha : {0.0, 0.3, pi / 6.0, -1.0}) {
            const Configuration origin(std::vector<double>(static_cast<size_t>(n), 0.0));
            const double got = lambda0_prime_at_one(jacobian(origin, ModelParams(alpha)));
            CHECK(got == doctest::Approx(n * std::cos(alpha)).epsilon(1e-10));
        }
    }
}

TEST_CASE("lambda0' is positive for the gradient flow (alpha = 0)") {
    SplitMix64 rng(34);
    int checked = 0;
    while (checked < 200) {
        const int n = 2 + static_cast<int>(rng.below(6));
        const JacobianParts parts = jacobian(Configuration(test::random_angles(n, rng)), ModelParams(0.0));
        try {
            CHECK(lambda0_prime_at_one(parts) > 0.0);
            ++checked;
        } catch (const std::domain_error&) {
            continue;
        }
    }
}

TEST_CASE("lambda0' matches the branch-tracking finite difference") {
    SplitMix64 rng(35);
    const ModelParams params(pi / 6.0);
    int checked = 0;
    while (checked < 50) {
        const JacobianParts parts = jacobian(Configuration(test::random_angles(3, rng)), params);
        double exact = 0.0;
        try {
            exact = lambda0_prime_at_one(parts);
        } catch (const std::domain_error&) {
            continue;
        }
        // Branch tracking needs the zero eigenvalue isolated; skip samples
        // where another eigenvalue sits close to it.
        const auto eig = eigenvalues(parts.J);
        double second = 1e30;
        for (const auto& lam : eig)
            if (std::abs(lam) > 1e-6) second = std::min(second, std::abs(lam));
        if (second < 1e-2) continue;
        const double fd = lambda0_finite_difference(parts, 1e-5);
        CHECK(exact == doctest::Approx(fd).epsilon(1e-4));
        ++checked;
    }
}

TEST_CASE("certificate at the origin: consistent parity, nothing unstable") {
    const IndexCertificate cert =
        index_certificate(Configuration({0.0, 0.0, 0.0}), ModelParams(0.3));
    CHECK(cert.verdict == IndexVerdict::ConsistentParity);
    CHECK(cert.n_roots == 0);
    CHECK(cert.n_plus_diag == 0);
    CHECK(cert.lambda0_prime > 0.0);
    CHECK(cert.parity == 1);
    CHECK(cert.n_plus_jacobian == 0);
    CHECK(cert.predicted_mod2() == 0);
}

TEST_CASE("certificate at the exact twist state is inapplicable (singular d)") {
    const Configuration twist({0.0, two_pi / 3.0, 2.0 * two_pi / 3.0});
    const IndexCertificate cert = index_certificate(twist, ModelParams(0.0));
    CHECK(cert.verdict == IndexVerdict::Inapplicable);
    CHECK(cert.reason == "singular diagonal");
    CHECK(cert.predicted_mod2() == -1);
}

TEST_CASE("perturbed twist state: parity matches the eigenvalue oracle") {
    SplitMix64 rng(36);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> theta{0.0, two_pi / 3.0, 2.0 * two_pi / 3.0};
        for (double& v : theta) v += rng.uniform(-1e-3, 1e-3);
        const IndexCertificate cert = index_certificate(Configuration(theta), ModelParams(0.0));
        if (!cert.applicable()) continue;
        CHECK(cert.parity == cert.lambda0_prime_sign);
        CHECK(cert.n_plus_jacobian == 2);  // still inside the unstable-2 region
    }
}

TEST_CASE("parity identity on random samples across n and alpha") {
    SplitMix64 rng(37);
    for (int n : {3, 4, 5}) {
        for (double alpha : {0.0, pi / 6.0, pi / 3.0}) {
            const ModelParams params(alpha);
            int applicable = 0, total = 0;
            for (int trial = 0; trial < 400; ++trial) {
                const IndexCertificate cert =
                    index_certificate(Configuration(test::random_angles(n, rng)), params);
                ++total;
                if (!cert.applicable()) continue;
                ++applicable;
                CHECK(cert.parity == cert.lambda0_prime_sign);
                if (alpha == 0.0)
                    CHECK(cert.n_plus_jacobian == cert.n_roots + cert.n_plus_diag);
                if (cert.verdict == IndexVerdict::InstabilityCertified)
                    CHECK(cert.n_plus_jacobian >= 1);
            }
            // Inapplicable draws are a measure-zero hazard.
            CHECK(applicable > total * 95 / 100);
        }
    }
}

TEST_CASE("certified conditions cover exactly the odd-parity predictions") {
    SplitMix64 rng(38);
    int certified = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(3));
        const IndexCertificate cert = index_certificate(Configuration(test::random_angles(n, rng)),
                                                        ModelParams(rng.uniform(-1.4, 1.4)));
        if (!cert.applicable()) continue;
        const bool odd_predicted = cert.predicted_mod2() == 1;
        CHECK((cert.verdict == IndexVerdict::InstabilityCertified) == odd_predicted);
        if (cert.verdict == IndexVerdict::InstabilityCertified) {
            ++certified;
            CHECK(cert.n_plus_jacobian >= 1);
            CHECK(cert.n_plus_jacobian % 2 == 1);
        }
    }
    CHECK(certified > 100);  // the unstable-odd region is not rare
}
