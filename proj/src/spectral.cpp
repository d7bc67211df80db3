#include "ks/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ks {

const char* to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::Stable: return "Stable";
        case StabilityClass::Unstable: return "Unstable";
        case StabilityClass::Degenerate: return "Degenerate";
    }
    return "?";
}

SpectralReport classify_matrix(const Matrix& m, double tol) {
    if (!(tol >= 1e-12 && tol <= 1e-6))
        throw std::invalid_argument("classify: tol must be in [1e-12, 1e-6]");
    SpectralReport rep;
    rep.tol = tol;
    rep.eigenvalues = eigenvalues(m);
    for (const auto& lam : rep.eigenvalues) {
        if (lam.real() > tol) {
            ++rep.n_plus;
        } else if (lam.real() < -tol) {
            // strictly stable direction
        } else if (std::abs(lam) <= tol) {
            ++rep.zero_multiplicity;
        } else {
            ++rep.degenerate_markers;
        }
    }
    if (rep.n_plus >= 1) {
        rep.cls = StabilityClass::Unstable;
        rep.unstable_count = rep.n_plus;
    } else if (rep.zero_multiplicity == 1 && rep.degenerate_markers == 0) {
        rep.cls = StabilityClass::Stable;
    } else {
        rep.cls = StabilityClass::Degenerate;
    }
    return rep;
}

SpectralReport classify(const Configuration& theta, const ModelParams& params, double tol) {
    return classify_matrix(jacobian(theta, params).J, tol);
}

bool s_dagger_member(const Configuration& theta, const ModelParams& params) {
    const int n = theta.size();
    const double alpha = params.alpha();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!(std::cos(theta[i] - theta[j] - alpha) > 0.0)) return false;
    return true;
}

namespace {

// Dominant eigenpair of an entrywise positive matrix by power iteration.
// x is returned with unit 2-norm.
std::pair<double, std::vector<double>> power_iterate(const Matrix& b, bool transpose) {
    const int n = b.rows();
    const double scale = std::max(1.0, b.inf_norm());
    const double tol = 1e-12 * scale;
    std::vector<double> x(static_cast<size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> bx;
    double mu = 0.0;
    const long cap = 2'000'000;
    for (long it = 0; it < cap; ++it) {
        bx = transpose ? b.multiply_transposed(x) : b.multiply(x);
        mu = dot(x, bx);  // Rayleigh quotient, ||x|| = 1
        double resid = 0.0;
        for (int i = 0; i < n; ++i)
            resid = std::max(resid, std::abs(bx[static_cast<size_t>(i)] - mu * x[static_cast<size_t>(i)]));
        const double nrm = norm2(bx);
        if (nrm == 0.0) throw NumericalFailure("perron_pair: iterate collapsed");
        for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = bx[static_cast<size_t>(i)] / nrm;
        if (resid <= tol) return {mu, x};
    }
    throw NumericalFailure("perron_pair: power iteration did not converge");
}

}  // namespace

PerronPair perron_pair(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("perron_pair: matrix must be square");
    const int n = m.rows();
    if (n < 2) throw std::invalid_argument("perron_pair: need n >= 2");
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) {
        max_diag = std::max(max_diag, std::abs(m(i, i)));
        for (int j = 0; j < n; ++j)
            if (i != j && !(m(i, j) > 0.0))
                throw std::invalid_argument("perron_pair: off-diagonal entries must be positive");
    }

    const double c = 1.0 + max_diag;
    Matrix b = m;
    for (int i = 0; i < n; ++i) b(i, i) += c;

    auto [mu_r, x] = power_iterate(b, false);
    auto [mu_l, y] = power_iterate(b, true);

    PerronPair p;
    p.lambda_top = 0.5 * (mu_r + mu_l) - c;
    const double yx = dot(y, x);
    if (yx <= 0.0) throw NumericalFailure("perron_pair: left/right normalization failed");
    for (double& v : y) v /= yx;
    p.x_right = std::move(x);
    p.y_left = std::move(y);
    return p;
}

namespace {

// One-sided derivative of the top eigenvalue branch at s = 0, where the
// homotopy matrix is the diagonal d and its top entry may be repeated:
// the derivative is the dominant eigenvalue of A restricted to the
// maximizing index set (first-order degenerate perturbation).
double derivative_at_zero(const JacobianParts& parts) {
    const int n = parts.n();
    const double dmax = *std::max_element(parts.diag.begin(), parts.diag.end());
    const double band = 1e-12 * std::max(1.0, std::abs(dmax));
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
        if (parts.diag[static_cast<size_t>(i)] >= dmax - band) idx.push_back(i);

    const Matrix a = parts.rank_two_part();
    if (idx.size() == 1) return a(idx[0], idx[0]);

    const int k = static_cast<int>(idx.size());
    Matrix sub(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub(i, j) = a(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
    return perron_pair(sub).lambda_top;
}

}  // namespace

double top_eigenvalue_derivative(const Configuration& theta, const ModelParams& params, double s) {
    if (!(s >= 0.0 && s <= 1.0))
        throw std::invalid_argument("top_eigenvalue_derivative: s must be in [0, 1]");
    if (!s_dagger_member(theta, params))
        throw std::invalid_argument("top_eigenvalue_derivative: theta outside the sufficient-stability region");
    const JacobianParts parts = jacobian(theta, params);
    if (s == 0.0) return derivative_at_zero(parts);
    const PerronPair p = perron_pair(parts.homotopy_matrix(s));
    return dot(p.y_left, parts.rank_two_part().multiply(p.x_right));
}

double homotopy_top_eigenvalue(const Configuration& theta, const ModelParams& params, double s) {
    if (!(s >= 0.0))
        throw std::invalid_argument("homotopy_top_eigenvalue: s must be >= 0");
    if (!s_dagger_member(theta, params))
        throw std::invalid_argument("homotopy_top_eigenvalue: theta outside the sufficient-stability region");
    const JacobianParts parts = jacobian(theta, params);
    if (s == 0.0) return *std::max_element(parts.diag.begin(), parts.diag.end());
    return perron_pair(parts.homotopy_matrix(s)).lambda_top;
}

}  // namespace ks
