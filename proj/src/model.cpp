#include "ks/model.hpp"

#include <cmath>

namespace ks {

Configuration::Configuration(std::vector<double> theta) : theta_(std::move(theta)) {
    if (theta_.size() < 2) throw std::invalid_argument("Configuration: need n >= 2 oscillators");
    for (double& v : theta_) {
        if (!std::isfinite(v)) throw std::invalid_argument("Configuration: non-finite angle");
        v = canonical_angle(v);
    }
}

double Configuration::canonical_angle(double x) {
    double r = std::remainder(x, two_pi);  // exact, lands in [-pi, pi]
    if (r <= -pi) r += two_pi;
    return r;
}

ModelParams::ModelParams(double alpha) : alpha_(alpha) {
    if (!std::isfinite(alpha) || std::abs(alpha) >= half_pi)
        throw std::invalid_argument("ModelParams: require |alpha| < pi/2");
}

void vector_field_raw(std::span<const double> theta, double alpha, std::span<double> out) {
    const size_t n = theta.size();
    if (out.size() != n) throw std::invalid_argument("vector_field: buffer size mismatch");
    const double sin_alpha = std::sin(alpha);
    for (size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (size_t j = 0; j < n; ++j) acc += std::sin(theta[j] - theta[i] - alpha) + sin_alpha;
        out[i] = acc;
    }
}

Frequencies vector_field(const Configuration& theta, const ModelParams& params) {
    Frequencies f(theta.angles().size());
    vector_field_raw(theta.angles(), params.alpha(), f);
    return f;
}

JacobianParts jacobian(const Configuration& theta, const ModelParams& params) {
    const int n = theta.size();
    const double alpha = params.alpha();
    JacobianParts parts;
    parts.J = Matrix(n, n);
    parts.diag.resize(static_cast<size_t>(n));
    parts.u.resize(static_cast<size_t>(n));
    parts.v.resize(static_cast<size_t>(n));
    parts.w.resize(static_cast<size_t>(n));
    parts.z.resize(static_cast<size_t>(n));

    for (int i = 0; i < n; ++i) {
        parts.u[static_cast<size_t>(i)] = std::cos(theta[i] + alpha / 2.0);
        parts.v[static_cast<size_t>(i)] = std::cos(theta[i] - alpha / 2.0);
        parts.w[static_cast<size_t>(i)] = std::sin(theta[i] + alpha / 2.0);
        parts.z[static_cast<size_t>(i)] = std::sin(theta[i] - alpha / 2.0);
    }
    for (int i = 0; i < n; ++i) {
        double offsum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double c = std::cos(theta[j] - theta[i] - alpha);
            parts.J(i, j) = c;
            offsum += c;
        }
        parts.J(i, i) = -offsum;
        parts.diag[static_cast<size_t>(i)] = -(offsum + std::cos(alpha));
    }
    return parts;
}

Matrix JacobianParts::rank_two_part() const {
    const int m = n();
    Matrix a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            a(i, j) = u[static_cast<size_t>(i)] * v[static_cast<size_t>(j)] +
                      w[static_cast<size_t>(i)] * z[static_cast<size_t>(j)];
    return a;
}

Matrix JacobianParts::homotopy_matrix(double s) const {
    const int m = n();
    Matrix js = rank_two_part();
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) js(i, j) *= s;
        js(i, i) += diag[static_cast<size_t>(i)];
    }
    return js;
}

std::vector<double> JacobianParts::rank_two_times_ones() const {
    const int m = n();
    double sv = 0.0, sz = 0.0;
    for (int j = 0; j < m; ++j) {
        sv += v[static_cast<size_t>(j)];
        sz += z[static_cast<size_t>(j)];
    }
    std::vector<double> out(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i)
        out[static_cast<size_t>(i)] = u[static_cast<size_t>(i)] * sv + w[static_cast<size_t>(i)] * sz;
    return out;
}

Matrix finite_difference_jacobian(const Configuration& theta, const ModelParams& params, double h) {
    if (!(h >= 1e-7 && h <= 1e-4))
        throw std::invalid_argument("finite_difference_jacobian: h must be in [1e-7, 1e-4]");
    const int n = theta.size();
    Matrix jac(n, n);
    std::vector<double> plus(theta.angles()), minus(theta.angles());
    std::vector<double> fplus(static_cast<size_t>(n)), fminus(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        plus[static_cast<size_t>(j)] += h;
        minus[static_cast<size_t>(j)] -= h;
        vector_field_raw(plus, params.alpha(), fplus);
        vector_field_raw(minus, params.alpha(), fminus);
        for (int i = 0; i < n; ++i)
            jac(i, j) = (fplus[static_cast<size_t>(i)] - fminus[static_cast<size_t>(i)]) / (2.0 * h);
        plus[static_cast<size_t>(j)] = theta[j];
        minus[static_cast<size_t>(j)] = theta[j];
    }
    return jac;
}

MeanZeroBasis::MeanZeroBasis(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("MeanZeroBasis: need n >= 2");
    basis_.resize(static_cast<size_t>(n - 1));
    for (int k = 1; k < n; ++k) {
        // e_k = (1, ..., 1, -k, 0, ..., 0) / sqrt(k (k + 1)), with k ones.
        std::vector<double> e(static_cast<size_t>(n), 0.0);
        const double scale = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
        for (int i = 0; i < k; ++i) e[static_cast<size_t>(i)] = scale;
        e[static_cast<size_t>(k)] = -k * scale;
        basis_[static_cast<size_t>(k - 1)] = std::move(e);
    }
}

std::vector<double> MeanZeroBasis::embed(std::span<const double> coords) const {
    if (static_cast<int>(coords.size()) != n_ - 1)
        throw std::invalid_argument("MeanZeroBasis::embed: expected n-1 coordinates");
    std::vector<double> theta(static_cast<size_t>(n_), 0.0);
    for (int k = 0; k < n_ - 1; ++k) {
        const auto& e = basis_[static_cast<size_t>(k)];
        for (int i = 0; i < n_; ++i) theta[static_cast<size_t>(i)] += coords[static_cast<size_t>(k)] * e[static_cast<size_t>(i)];
    }
    return theta;
}

std::vector<double> MeanZeroBasis::project(std::span<const double> theta) const {
    if (static_cast<int>(theta.size()) != n_)
        throw std::invalid_argument("MeanZeroBasis::project: expected n components");
    std::vector<double> coords(static_cast<size_t>(n_ - 1), 0.0);
    for (int k = 0; k < n_ - 1; ++k) coords[static_cast<size_t>(k)] = dot(basis_[static_cast<size_t>(k)], theta);
    return coords;
}

void PlaneGrid::validate() const {
    if (resolution < 2) throw std::invalid_argument("PlaneGrid: resolution must be >= 2");
    if (!(x_min < x_max) || !(y_min < y_max) || !std::isfinite(x_min) || !std::isfinite(x_max) ||
        !std::isfinite(y_min) || !std::isfinite(y_max))
        throw std::invalid_argument("PlaneGrid: invalid ranges");
}

}  // namespace ks
