#include "ks/index_theorem.hpp"

#include <cmath>
#include <limits>

namespace ks {

namespace {
constexpr double kSingularDiag = 1e-12;
constexpr double kRootGuard = 1e-9;
}  // namespace

const char* to_string(IndexVerdict v) {
    switch (v) {
        case IndexVerdict::ConsistentParity: return "ConsistentParity";
        case IndexVerdict::InstabilityCertified: return "InstabilityCertified";
        case IndexVerdict::Inapplicable: return "Inapplicable";
    }
    return "?";
}

QuadraticCoeffs quadratic_coeffs(const JacobianParts& parts) {
    const int n = parts.n();
    for (int i = 0; i < n; ++i)
        if (std::abs(parts.diag[static_cast<size_t>(i)]) <= kSingularDiag)
            throw SingularDiagonal("quadratic_coeffs: diagonal entry within 1e-12 of zero");

    // c1 = <v, d^{-1} u> + <z, d^{-1} w>, termwise.
    std::vector<double> terms(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto k = static_cast<size_t>(i);
        terms[k] = (parts.u[k] * parts.v[k] + parts.w[k] * parts.z[k]) / parts.diag[k];
    }
    QuadraticCoeffs q;
    q.c0 = 1.0;
    q.c1 = neumaier_sum(terms);

    // c2 expanded into the 2x2 minors of the rank-two factors:
    //   <v,d^-1 u><z,d^-1 w> - <z,d^-1 u><v,d^-1 w>
    //     = sum_{i<j} (u_i w_j - u_j w_i)(v_i z_j - v_j z_i) / (d_i d_j).
    // The product form cancels catastrophically when some d_i is small;
    // the minor form never squares the offending 1/d_i.
    std::vector<double> pair_terms;
    pair_terms.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const auto a = static_cast<size_t>(i), b = static_cast<size_t>(j);
            const double uw = parts.u[a] * parts.w[b] - parts.u[b] * parts.w[a];
            const double vz = parts.v[a] * parts.z[b] - parts.v[b] * parts.z[a];
            pair_terms.push_back(uw * vz / (parts.diag[a] * parts.diag[b]));
        }
    }
    q.c2 = neumaier_sum(pair_terms);
    return q;
}

RootCount count_roots_in_unit_interval(double c0, double c1, double c2) {
    RootCount rc;
    auto classify_root = [&rc](double r, int multiplicity) {
        rc.roots.push_back(r);
        if (std::abs(r) <= kRootGuard || std::abs(r - 1.0) <= kRootGuard) {
            rc.endpoint_root = true;
            return;
        }
        if (r > 0.0 && r < 1.0) rc.n_in_unit_interval += multiplicity;
    };

    if (std::abs(c2) <= 1e-12 * (1.0 + std::abs(c1))) {
        // Degenerate quadratic: linear (or constant) polynomial.
        if (std::abs(c1) > 1e-12 * (1.0 + std::abs(c0))) classify_root(-c0 / c1, 1);
        return rc;
    }

    const double disc = c1 * c1 - 4.0 * c2 * c0;
    if (disc < -kRootGuard) {
        rc.complex_roots = true;
        return rc;
    }
    if (disc <= 0.0) {
        rc.double_root = true;
        classify_root(-c1 / (2.0 * c2), 2);
        return rc;
    }

    const double sq = std::sqrt(disc);
    const double qq = -0.5 * (c1 + std::copysign(sq, c1));
    double r1, r2;
    if (qq != 0.0) {
        r1 = qq / c2;
        r2 = c0 / qq;
    } else {
        r1 = sq / (2.0 * c2);
        r2 = -r1;
    }
    if (std::abs(r1 - r2) <= kRootGuard * std::max(1.0, std::abs(r1))) {
        rc.double_root = true;
        classify_root(0.5 * (r1 + r2), 2);
        return rc;
    }
    classify_root(r1, 1);
    classify_root(r2, 1);
    return rc;
}

namespace {

double lambda0_prime_from_null_vector(const JacobianParts& parts, const std::vector<double>& y) {
    const int n = parts.n();
    const std::vector<double> a_ones = parts.rank_two_times_ones();
    double denom = 0.0;
    for (double v : y) denom += v;  // <y, 1>
    if (std::abs(denom) <= 1e-9 * std::sqrt(static_cast<double>(n)))
        throw std::domain_error("lambda0_prime: defective zero eigenvalue (<y, 1> ~ 0)");
    return dot(y, a_ones) / denom;
}

}  // namespace

double lambda0_prime_at_one(const JacobianParts& parts) {
    const SpectralReport rep = classify_matrix(parts.J, 1e-9);
    if (rep.zero_multiplicity != 1)
        throw std::domain_error("lambda0_prime: zero eigenvalue of J is not simple");
    return lambda0_prime_from_null_vector(parts, left_null_vector(parts.J));
}

int IndexCertificate::predicted_mod2() const {
    if (verdict == IndexVerdict::Inapplicable) return -1;
    return (n_plus_diag + n_roots + (lambda0_prime_sign < 0 ? 1 : 0)) % 2;
}

IndexCertificate index_certificate(const Configuration& theta, const ModelParams& params, double tol) {
    IndexCertificate cert;
    const JacobianParts parts = jacobian(theta, params);
    const int n = parts.n();

    const SpectralReport rep = classify_matrix(parts.J, tol);
    cert.n_plus_jacobian = rep.n_plus;

    auto inapplicable = [&cert](const char* why) {
        cert.verdict = IndexVerdict::Inapplicable;
        cert.reason = why;
        return cert;
    };

    QuadraticCoeffs q;
    try {
        q = quadratic_coeffs(parts);
    } catch (const SingularDiagonal&) {
        return inapplicable("singular diagonal");
    }
    cert.c0 = q.c0;
    cert.c1 = q.c1;
    cert.c2 = q.c2;

    const RootCount rc = count_roots_in_unit_interval(q.c0, q.c1, q.c2);
    cert.roots = rc.roots;
    cert.n_roots = rc.n_in_unit_interval;

    for (int i = 0; i < n; ++i)
        if (parts.diag[static_cast<size_t>(i)] > 0.0) ++cert.n_plus_diag;

    // P always has the root s = 1. A second root inside its guard band
    // means the crossing at s = 1 is not transverse; a root inside the
    // s = 0 guard band is equally untrustworthy.
    int near_one = 0, near_zero = 0;
    for (double r : rc.roots) {
        if (std::abs(r - 1.0) <= kRootGuard)
            ++near_one;
        else if (std::abs(r) <= kRootGuard)
            ++near_zero;
    }
    if (rc.complex_roots) return inapplicable("determinant polynomial has complex roots");
    if (rc.double_root || near_one >= 2) return inapplicable("s = 1 is a double root");
    if (near_one == 0) return inapplicable("s = 1 root lost to rounding");
    if (near_zero > 0) return inapplicable("root inside the s = 0 guard band");

    if (rep.zero_multiplicity != 1) return inapplicable("kernel of J is not simple");

    std::vector<double> y;
    try {
        y = left_null_vector(parts.J);
        cert.lambda0_prime = lambda0_prime_from_null_vector(parts, y);
    } catch (const std::domain_error&) {
        return inapplicable("defective zero eigenvalue");
    }
    if (!std::isfinite(cert.lambda0_prime) ||
        std::abs(cert.lambda0_prime) <= 1e-12 * std::max(1.0, static_cast<double>(n)))
        return inapplicable("lambda0' sign is ambiguous");

    cert.lambda0_prime_sign = cert.lambda0_prime > 0.0 ? 1 : -1;
    cert.parity = ((cert.n_plus_jacobian - cert.n_plus_diag - cert.n_roots) % 2 + 2) % 2 == 0 ? 1 : -1;

    const bool diag_even = cert.n_plus_diag % 2 == 0;
    const bool prime_pos = cert.lambda0_prime_sign > 0;
    bool certified = false;
    if (cert.n_roots == 0)
        certified = (diag_even && !prime_pos) || (!diag_even && prime_pos);
    else if (cert.n_roots == 1)
        certified = (diag_even && prime_pos) || (!diag_even && !prime_pos);
    cert.verdict = certified ? IndexVerdict::InstabilityCertified : IndexVerdict::ConsistentParity;
    return cert;
}

}  // namespace ks
