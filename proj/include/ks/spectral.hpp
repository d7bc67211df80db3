#pragma once

#include <complex>
#include <vector>

#include "ks/model.hpp"
#include "ks/types.hpp"

namespace ks {

enum class StabilityClass { Stable, Unstable, Degenerate };

const char* to_string(StabilityClass c);

/// Spectrum of the Jacobian bucketed by a classification tolerance.
/// Stable demands no eigenvalue right of +tol and a one-dimensional
/// kernel with everything else strictly left of -tol; anything sitting
/// on the boundary is reported Degenerate rather than guessed at.
struct SpectralReport {
    std::vector<std::complex<double>> eigenvalues;
    int n_plus = 0;             // Re(lambda) > tol, with multiplicity
    int zero_multiplicity = 0;  // |lambda| <= tol
    int degenerate_markers = 0; // |Re lambda| <= tol but |lambda| > tol
    StabilityClass cls = StabilityClass::Degenerate;
    int unstable_count = 0;     // k for Unstable(k)
    double tol = 1e-9;
};

SpectralReport classify_matrix(const Matrix& m, double tol = 1e-9);
SpectralReport classify(const Configuration& theta, const ModelParams& params, double tol = 1e-9);

/// Membership in the Perron sufficient-stability region: every ordered
/// pair (i, j), including i = j, satisfies cos(theta_i - theta_j - alpha) > 0.
bool s_dagger_member(const Configuration& theta, const ModelParams& params);

/// Top eigenvalue of a matrix with strictly positive off-diagonal
/// entries, with the associated positive left/right eigenvectors
/// normalized to <y, x> = 1.
struct PerronPair {
    double lambda_top = 0.0;
    std::vector<double> x_right;
    std::vector<double> y_left;
};

/// Power iteration on m + cI with c = 1 + max|m_ii|, which is entrywise
/// positive; left vector via the transpose. Stops on a Rayleigh-quotient
/// residual <= 1e-12 * ||m + cI||_inf.
/// Throws std::invalid_argument if an off-diagonal entry is <= 0.
PerronPair perron_pair(const Matrix& m);

/// d lambda_1 / ds for the homotopy J(s) = diag(d) + s A at a point of
/// the sufficient-stability region: <y(s), A x(s)> with the normalized
/// Perron pair of J(s). At s = 0 the top of diag(d) may be degenerate;
/// the one-sided derivative is then the Perron value of A restricted to
/// the maximizing coordinates. Strictly positive on its domain.
double top_eigenvalue_derivative(const Configuration& theta, const ModelParams& params, double s);

/// lambda_1(s) itself: max d_i at s = 0, Perron value of J(s) for s > 0.
double homotopy_top_eigenvalue(const Configuration& theta, const ModelParams& params, double s);

}  // namespace ks
