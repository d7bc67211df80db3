#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ks/model.hpp"
#include "ks/rng.hpp"
#include "ks/spectral.hpp"
#include "support/oracles.hpp"

using namespace ks;

namespace {

// Points of the sufficient-stability region: a tight cluster keeps all
// pairwise phase differences below pi/2 - |alpha|.
Configuration s_dagger_point(int n, double alpha, SplitMix64& rng) {
    const double spread = 0.49 * (half_pi - std::abs(alpha));
    const double center = rng.uniform(-pi, pi);
    std::vector<double> theta(static_cast<size_t>(n));
    for (double& v : theta) v = center + rng.uniform(-spread, spread);
    return Configuration(theta);
}

Matrix random_positive_offdiag(int n, SplitMix64& rng) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = (i == j) ? rng.uniform(-3.0, 3.0) : rng.uniform(0.05, 2.0);
    return m;
}

}  // namespace

TEST_CASE("origin classifies stable for any phase-lag") {
    for (double alpha : {0.0, 0.3, pi / 6.0, -1.2, 1.5}) {
        for (int n : {2, 3, 5}) {
            const SpectralReport rep =
                classify(Configuration(std::vector<double>(static_cast<size_t>(n), 0.0)), ModelParams(alpha));
            CHECK(rep.cls == StabilityClass::Stable);
            CHECK(rep.n_plus == 0);
            CHECK(rep.zero_multiplicity == 1);
        }
    }
}

TEST_CASE("twist state at alpha = 0 is Unstable(2) with spectrum {0, 1.5, 1.5}") {
    const Configuration twist({0.0, two_pi / 3.0, 2.0 * two_pi / 3.0});
    const SpectralReport rep = classify(twist, ModelParams(0.0));
    CHECK(rep.cls == StabilityClass::Unstable);
    CHECK(rep.unstable_count == 2);
    std::vector<std::complex<double>> want{{0.0, 0.0}, {1.5, 0.0}, {1.5, 0.0}};
    CHECK(test::spectrum_distance(rep.eigenvalues, want) < 1e-9);
}

TEST_CASE("pi state at alpha = 0 is the saddle Unstable(1)") {
    const SpectralReport rep = classify(Configuration({0.0, pi, 0.0}), ModelParams(0.0));
    CHECK(rep.cls == StabilityClass::Unstable);
    CHECK(rep.unstable_count == 1);
    // Hand-computed spectrum of [[0,-1,1],[-1,2,-1],[1,-1,0]].
    std::vector<std::complex<double>> want{{-1.0, 0.0}, {0.0, 0.0}, {3.0, 0.0}};
    CHECK(test::spectrum_distance(rep.eigenvalues, want) < 1e-9);
}

TEST_CASE("zero is in the spectrum of every jacobian") {
    SplitMix64 rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(6));
        const SpectralReport rep = classify(Configuration(test::random_angles(n, rng)),
                                            ModelParams(rng.uniform(-1.5, 1.5)));
        double nearest = 1e30;
        for (const auto& lam : rep.eigenvalues) nearest = std::min(nearest, std::abs(lam));
        CHECK(nearest <= 1e-9);
    }
}

TEST_CASE("a double kernel is reported Degenerate, never Stable") {
    // n = 2 with a quarter-turn gap: spectrum {0, -2 cos(pi/2)} ~ {0, 0}.
    const SpectralReport rep = classify(Configuration({0.0, half_pi}), ModelParams(0.0));
    CHECK(rep.zero_multiplicity == 2);
    CHECK(rep.n_plus == 0);
    CHECK(rep.cls == StabilityClass::Degenerate);
}

TEST_CASE("spectral buckets partition the spectrum") {
    SplitMix64 rng(29);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(6));
        const SpectralReport rep = classify(Configuration(test::random_angles(n, rng)),
                                            ModelParams(rng.uniform(-1.5, 1.5)));
        int negative = 0;
        for (const auto& lam : rep.eigenvalues)
            if (lam.real() < -rep.tol) ++negative;
        CHECK(rep.n_plus + rep.zero_multiplicity + rep.degenerate_markers + negative == n);
    }
}

TEST_CASE("classification tolerance is validated") {
    const Configuration theta({0.0, 1.0});
    CHECK_THROWS_AS(classify(theta, ModelParams(0.0), 1e-13), std::invalid_argument);
    CHECK_THROWS_AS(classify(theta, ModelParams(0.0), 1e-5), std::invalid_argument);
}

TEST_CASE("s_dagger membership examples") {
    CHECK(s_dagger_member(Configuration({0.0, 0.0, 0.0}), ModelParams(0.4)));
    CHECK_FALSE(s_dagger_member(Configuration({0.0, two_pi / 3.0, 2.0 * two_pi / 3.0}), ModelParams(0.0)));

    // All eight ordered differences of (0, 0.6, -0.6) at alpha = 0.3 stay
    // inside the positive-cosine band (the widest is cos(-1.5) > 0).
    CHECK(s_dagger_member(Configuration({0.0, 0.6, -0.6}), ModelParams(0.3)));
    // Pushing one pair past pi/2 breaks it.
    CHECK_FALSE(s_dagger_member(Configuration({0.0, 0.8, -0.8}), ModelParams(0.3)));
}

TEST_CASE("perron pair of a zero-row-sum matrix is (0, ones)") {
    SplitMix64 rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(5));
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j)
                if (i != j) {
                    m(i, j) = rng.uniform(0.05, 2.0);
                    row += m(i, j);
                }
            m(i, i) = -row;
        }
        const PerronPair p = perron_pair(m);
        CHECK(std::abs(p.lambda_top) < 1e-10);
        // Right vector proportional to ones.
        double lo = 1e30, hi = -1e30;
        for (double v : p.x_right) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(hi - lo < 1e-9);
        CHECK(lo > 0.0);
        CHECK(dot(p.y_left, p.x_right) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("perron pair with negative row sums has a negative top eigenvalue") {
    SplitMix64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(5));
        Matrix m(n, n);
        double max_row = -1e30;
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j)
                if (i != j) {
                    m(i, j) = rng.uniform(0.05, 1.0);
                    row += m(i, j);
                }
            m(i, i) = -row - rng.uniform(0.1, 2.0);
            max_row = std::max(max_row, m(i, i) + row);
        }
        const PerronPair p = perron_pair(m);
        CHECK(p.lambda_top < 0.0);
        CHECK(p.lambda_top <= max_row + 1e-10);
    }
}

TEST_CASE("perron row-sum bounds on 1000 random positive-offdiagonal matrices") {
    SplitMix64 rng(24);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(5));
        const Matrix m = random_positive_offdiag(n, rng);
        double lo = 1e30, hi = -1e30;
        for (int i = 0; i < n; ++i) {
            double row = 0.0;
            for (int j = 0; j < n; ++j) row += m(i, j);
            lo = std::min(lo, row);
            hi = std::max(hi, row);
        }
        const PerronPair p = perron_pair(m);
        CHECK(p.lambda_top >= lo - 1e-9);
        CHECK(p.lambda_top <= hi + 1e-9);
        for (double v : p.x_right) CHECK(v > 0.0);
        for (double v : p.y_left) CHECK(v > 0.0);
    }
}

TEST_CASE("perron precondition: off-diagonal positivity enforced") {
    Matrix m(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = 1.0;
    m(0, 1) = 0.0;
    CHECK_THROWS_AS(perron_pair(m), std::invalid_argument);
    m(0, 1) = -0.5;
    CHECK_THROWS_AS(perron_pair(m), std::invalid_argument);
}

TEST_CASE("homotopy top eigenvalue sits between max diagonal and zero at s = 0.5") {
    SplitMix64 rng(25);
    for (int trial = 0; trial < 30; ++trial) {
        const double alpha = rng.uniform(-1.0, 1.0);
        const int n = 2 + static_cast<int>(rng.below(5));
        const Configuration theta = s_dagger_point(n, alpha, rng);
        const ModelParams params(alpha);
        const double at0 = homotopy_top_eigenvalue(theta, params, 0.0);
        const double mid = homotopy_top_eigenvalue(theta, params, 0.5);
        CHECK(mid > at0);
        CHECK(mid < 0.0);
    }
}

TEST_CASE("top eigenvalue derivative: closed form at the origin, any s") {
    for (int n : {3, 5}) {
        const Configuration origin(std::vector<double>(static_cast<size_t>(n), 0.0));
        for (double alpha : {0.0, 0.3, pi / 6.0}) {
            for (double s : {0.0, 0.25, 0.7, 1.0}) {
                const double got = top_eigenvalue_derivative(origin, ModelParams(alpha), s);
                CHECK(got == doctest::Approx(n * std::cos(alpha)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("top eigenvalue derivative matches finite differences of lambda_1") {
    SplitMix64 rng(26);
    for (int trial = 0; trial < 20; ++trial) {
        const double alpha = rng.uniform(-0.8, 0.8);
        const int n = 3 + static_cast<int>(rng.below(3));
        const Configuration theta = s_dagger_point(n, alpha, rng);
        const ModelParams params(alpha);
        const double s = 0.7;
        const double h = 1e-5;
        const double fd = (homotopy_top_eigenvalue(theta, params, s + h) -
                           homotopy_top_eigenvalue(theta, params, s - h)) /
                          (2.0 * h);
        const double got = top_eigenvalue_derivative(theta, params, s);
        CHECK(got == doctest::Approx(fd).epsilon(1e-5));
        CHECK(got > 0.0);
    }
}

TEST_CASE("derivative precondition: outside the dagger region it throws") {
    const Configuration twist({0.0, two_pi / 3.0, 2.0 * two_pi / 3.0});
    CHECK_THROWS_AS(top_eigenvalue_derivative(twist, ModelParams(0.0), 0.5), std::invalid_argument);
}

TEST_CASE("the dagger region is contained in the stable region") {
    SplitMix64 rng(27);
    for (int trial = 0; trial < 500; ++trial) {
        const double alpha = rng.uniform(-1.3, 1.3);
        const int n = 2 + static_cast<int>(rng.below(5));
        const Configuration theta = s_dagger_point(n, alpha, rng);
        REQUIRE(s_dagger_member(theta, ModelParams(alpha)));
        CHECK(classify(theta, ModelParams(alpha)).cls == StabilityClass::Stable);
    }
}

TEST_CASE("just past s = 1 the homotopy matrix goes unstable") {
    SplitMix64 rng(28);
    for (int trial = 0; trial < 30; ++trial) {
        const double alpha = rng.uniform(-1.0, 1.0);
        const int n = 2 + static_cast<int>(rng.below(5));
        const Configuration theta = s_dagger_point(n, alpha, rng);
        const JacobianParts parts = jacobian(theta, ModelParams(alpha));
        const SpectralReport rep = classify_matrix(parts.homotopy_matrix(1.05));
        CHECK(rep.n_plus >= 1);
    }
}
