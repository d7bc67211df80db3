#pragma once

#include <limits>
#include <string>
#include <vector>

#include "ks/model.hpp"
#include "ks/spectral.hpp"
#include "ks/types.hpp"

namespace ks {

/// Thrown by quadratic_coeffs when some |d_i| <= 1e-12; callers report
/// the point as Inapplicable instead of propagating.
class SingularDiagonal : public std::runtime_error {
public:
    explicit SingularDiagonal(const std::string& what) : std::runtime_error(what) {}
};

/// Coefficients of the determinant ratio P(s) = det(J(s)) / det(diag d),
/// a quadratic c0 + c1 s + c2 s^2 with c0 = 1 and root s = 1.
struct QuadraticCoeffs {
    double c0 = 1.0;
    double c1 = 0.0;
    double c2 = 0.0;

    double eval(double s) const { return c0 + s * (c1 + s * c2); }
};

QuadraticCoeffs quadratic_coeffs(const JacobianParts& parts);

/// Real roots of c0 + c1 s + c2 s^2 and the count inside the open unit
/// interval. Roots within 1e-9 of 0 or 1 are excluded from the count
/// and flagged; a double root is counted with multiplicity and flagged.
struct RootCount {
    std::vector<double> roots;
    int n_in_unit_interval = 0;
    bool double_root = false;
    bool endpoint_root = false;  // a root fell inside a guard band
    bool complex_roots = false;  // discriminant below -1e-9 (not expected here)
};

RootCount count_roots_in_unit_interval(double c0, double c1, double c2);

/// First-order perturbation of the zero eigenvalue of J(s) at s = 1:
/// <y, A 1> / <y, 1> with y the left null vector of J and 1 the right
/// null vector. Requires a simple kernel; throws std::domain_error when
/// the kernel is not simple or <y, 1> vanishes.
double lambda0_prime_at_one(const JacobianParts& parts);

enum class IndexVerdict { ConsistentParity, InstabilityCertified, Inapplicable };

const char* to_string(IndexVerdict v);

/// Everything the parity theorem needs at one configuration, plus the
/// independently computed eigenvalue count it is checked against.
/// The parity field is (-1)^(n_plus_J - n_plus_diag - n_roots) and the
/// theorem asserts it equals the sign of lambda0_prime whenever the
/// certificate is applicable.
struct IndexCertificate {
    double c0 = std::numeric_limits<double>::quiet_NaN();
    double c1 = std::numeric_limits<double>::quiet_NaN();
    double c2 = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> roots;
    int n_roots = 0;          // n_R: roots of P in the open unit interval
    int n_plus_diag = 0;      // positive entries of d
    int n_plus_jacobian = 0;  // eigenvalues of J with Re > tol (QR path)
    double lambda0_prime = std::numeric_limits<double>::quiet_NaN();
    int lambda0_prime_sign = 0;  // +1 / -1, 0 when inapplicable
    int parity = 0;              // +1 / -1, 0 when inapplicable
    IndexVerdict verdict = IndexVerdict::Inapplicable;
    std::string reason;  // set when Inapplicable

    bool applicable() const { return verdict != IndexVerdict::Inapplicable; }

    /// Parity-predicted unstable-dimension bit (n_plus mod 2): what the
    /// theorem knows without an eigensolver. -1 when inapplicable.
    int predicted_mod2() const;
};

IndexCertificate index_certificate(const Configuration& theta, const ModelParams& params,
                                   double tol = 1e-9);

}  // namespace ks
