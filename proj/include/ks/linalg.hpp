#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "ks/types.hpp"

namespace ks {

/// Minimal dense real matrix, row-major storage.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    std::span<const double> data() const { return a_; }
    std::span<double> data() { return a_; }

    Matrix transposed() const;
    std::vector<double> multiply(std::span<const double> x) const;
    std::vector<double> multiply_transposed(std::span<const double> x) const;

    /// Max absolute row sum.
    double inf_norm() const;

    bool all_finite() const;

private:
    int rows_, cols_;
    std::vector<double> a_;
};

/// FNV-1a hash over the matrix bytes; used to tag numerical failures
/// so the offending input can be reproduced.
std::uint64_t matrix_fnv1a(const Matrix& m);

/// LU decomposition with partial pivoting (Doolittle). A zero pivot is
/// recorded rather than thrown so determinants of singular matrices are
/// well-defined (zero) and near-null solves remain usable for inverse
/// iteration.
class LuDecomposition {
public:
    static LuDecomposition compute(const Matrix& m);

    double determinant() const;
    bool singular() const { return singular_; }

    /// Solves A x = b. If A was exactly singular the tiny-pivot
    /// substitute makes this a regularized solve (used by inverse
    /// iteration); callers needing exactness should check singular().
    std::vector<double> solve(std::span<const double> b) const;

private:
    Matrix lu_;
    std::vector<int> perm_;
    int sign_ = 1;
    bool singular_ = false;
    double pivot_floor_ = 0.0;
};

/// Full spectrum of a dense real matrix with algebraic multiplicity.
/// Balancing, Householder reduction to Hessenberg form, then Francis
/// double-shift QR iteration (eigenvalues only). Complex eigenvalues
/// come out in exact conjugate pairs.
///
/// Throws std::invalid_argument for non-square/non-finite input or
/// n > 500, NumericalFailure if the QR iteration stalls.
std::vector<std::complex<double>> eigenvalues(const Matrix& m);

/// Left null vector of a (numerically) rank-deficient square matrix,
/// computed by inverse iteration on the transpose. Returns a unit
/// 2-norm vector y with y^T m ~ 0. Intended for matrices known to have
/// a simple zero eigenvalue, e.g. the model Jacobian.
std::vector<double> left_null_vector(const Matrix& m);

/// Compensated (Neumaier) summation.
double neumaier_sum(std::span<const double> terms);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace ks
