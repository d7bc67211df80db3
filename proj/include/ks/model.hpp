#pragma once

#include <span>
#include <vector>

#include "ks/linalg.hpp"
#include "ks/types.hpp"

namespace ks {

/// Jacobian of the coupling field together with its diagonal-plus-rank-2
/// split J = diag(d) + u v^T + w z^T. The rank-2 part is the coupling
/// cosine matrix A with A_ij = cos(theta_j - theta_i - alpha); splitting
/// it off the full-sum diagonal d_i = -sum_j cos(theta_j - theta_i - alpha)
/// is what makes the determinant homotopy tractable.
struct JacobianParts {
    Matrix J;
    std::vector<double> diag;  // d
    std::vector<double> u, v, w, z;

    int n() const { return static_cast<int>(diag.size()); }

    /// The rank-2 coupling matrix A = u v^T + w z^T.
    Matrix rank_two_part() const;

    /// Homotopy family J(s) = diag(d) + s A; J(0) = diag(d), J(1) = J.
    Matrix homotopy_matrix(double s) const;

    /// A applied to the all-ones vector (equals -d up to rounding).
    std::vector<double> rank_two_times_ones() const;
};

/// Coupling vector field: f_i = sum_j [ sin(theta_j - theta_i - alpha) + sin alpha ].
/// Translation invariant (f(theta + c 1) = f(theta)) and 2*pi-periodic
/// per component.
Frequencies vector_field(const Configuration& theta, const ModelParams& params);

/// Same field on a raw (not canonicalized) state; used by the integrator.
void vector_field_raw(std::span<const double> theta, double alpha, std::span<double> out);

/// Jacobian at theta: off-diagonal J_ij = cos(theta_j - theta_i - alpha),
/// diagonal J_ii = -sum_{j != i} cos(theta_j - theta_i - alpha). Row sums
/// vanish, so 1 is always a right null vector.
JacobianParts jacobian(const Configuration& theta, const ModelParams& params);

/// Central-difference approximation of the Jacobian; test oracle.
/// Requires h in [1e-7, 1e-4].
Matrix finite_difference_jacobian(const Configuration& theta, const ModelParams& params, double h);

/// Orthonormal basis of the mean-zero hyperplane 1^perp. For n = 3 this
/// is exactly e1 = (1,-1,0)/sqrt(2), e2 = (1,1,-2)/sqrt(6), the plane
/// coordinates used by all exported scan data.
class MeanZeroBasis {
public:
    explicit MeanZeroBasis(int n);

    int n() const { return n_; }
    int dimension() const { return n_ - 1; }
    const std::vector<double>& vector(int k) const { return basis_[static_cast<size_t>(k)]; }

    /// theta = sum_k coords[k] * e_k (a mean-zero point, not canonicalized).
    std::vector<double> embed(std::span<const double> coords) const;

    /// coords[k] = <theta, e_k>; embed(project(theta)) = theta - mean(theta) 1.
    std::vector<double> project(std::span<const double> theta) const;

private:
    int n_;
    std::vector<std::vector<double>> basis_;
};

/// Rectangular grid in the n = 3 plane coordinates (x along e1, y along e2).
/// The default window covers one fundamental domain of the plane lattice.
struct PlaneGrid {
    double x_min = -2.0 * two_pi / 3.0;
    double x_max = 2.0 * two_pi / 3.0;
    double y_min = -2.0 * two_pi / 3.0;
    double y_max = 2.0 * two_pi / 3.0;
    int resolution = 400;

    double x(int i) const { return x_min + (x_max - x_min) * i / (resolution - 1); }
    double y(int j) const { return y_min + (y_max - y_min) * j / (resolution - 1); }
    void validate() const;
};

}  // namespace ks
