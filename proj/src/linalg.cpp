#include "ks/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>

namespace ks {

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

std::vector<double> Matrix::multiply(std::span<const double> x) const {
    std::vector<double> y(static_cast<size_t>(rows_), 0.0);
    for (int i = 0; i < rows_; ++i) {
        double acc = 0.0;
        for (int j = 0; j < cols_; ++j) acc += (*this)(i, j) * x[static_cast<size_t>(j)];
        y[static_cast<size_t>(i)] = acc;
    }
    return y;
}

std::vector<double> Matrix::multiply_transposed(std::span<const double> x) const {
    std::vector<double> y(static_cast<size_t>(cols_), 0.0);
    for (int i = 0; i < rows_; ++i) {
        const double xi = x[static_cast<size_t>(i)];
        for (int j = 0; j < cols_; ++j) y[static_cast<size_t>(j)] += (*this)(i, j) * xi;
    }
    return y;
}

double Matrix::inf_norm() const {
    double best = 0.0;
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

bool Matrix::all_finite() const {
    for (double v : a_)
        if (!std::isfinite(v)) return false;
    return true;
}

std::uint64_t matrix_fnv1a(const Matrix& m) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix_bytes = [&h](const void* p, size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    const int dims[2] = {m.rows(), m.cols()};
    mix_bytes(dims, sizeof(dims));
    auto d = m.data();
    mix_bytes(d.data(), d.size() * sizeof(double));
    return h;
}

double neumaier_sum(std::span<const double> terms) {
    double sum = 0.0, comp = 0.0;
    for (double t : terms) {
        double s = sum + t;
        if (std::abs(sum) >= std::abs(t))
            comp += (sum - s) + t;
        else
            comp += (t - s) + sum;
        sum = s;
    }
    return sum + comp;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// ---------------------------------------------------------------------------
// LU with partial pivoting
// ---------------------------------------------------------------------------

LuDecomposition LuDecomposition::compute(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("LU: matrix must be square");
    const int n = m.rows();
    LuDecomposition d;
    d.lu_ = m;
    d.perm_.resize(static_cast<size_t>(n));
    Matrix& a = d.lu_;
    d.pivot_floor_ = std::numeric_limits<double>::epsilon() * std::max(1.0, m.inf_norm());

    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                p = i;
            }
        }
        d.perm_[static_cast<size_t>(k)] = p;
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            d.sign_ = -d.sign_;
        }
        if (a(k, k) == 0.0) {
            // Keep factorization usable for inverse iteration.
            d.singular_ = true;
            a(k, k) = d.pivot_floor_ > 0.0 ? d.pivot_floor_ : std::numeric_limits<double>::min();
        }
        const double inv = 1.0 / a(k, k);
        for (int i = k + 1; i < n; ++i) {
            a(i, k) *= inv;
            const double lik = a(i, k);
            if (lik != 0.0)
                for (int j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
        }
    }
    return d;
}

double LuDecomposition::determinant() const {
    if (singular_) return 0.0;
    const int n = lu_.rows();
    long double p = sign_;
    for (int i = 0; i < n; ++i) p *= static_cast<long double>(lu_(i, i));
    return static_cast<double>(p);
}

std::vector<double> LuDecomposition::solve(std::span<const double> b) const {
    const int n = lu_.rows();
    if (static_cast<int>(b.size()) != n) throw std::invalid_argument("LU solve: size mismatch");
    std::vector<double> x(b.begin(), b.end());
    // Row interchanges were applied to full rows during factorization,
    // so apply them all to the right-hand side up front.
    for (int k = 0; k < n; ++k)
        std::swap(x[static_cast<size_t>(k)], x[static_cast<size_t>(perm_[static_cast<size_t>(k)])]);
    for (int k = 0; k < n; ++k)
        for (int i = k + 1; i < n; ++i) x[static_cast<size_t>(i)] -= lu_(i, k) * x[static_cast<size_t>(k)];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[static_cast<size_t>(i)] -= lu_(i, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] /= lu_(i, i);
    }
    return x;
}

// ---------------------------------------------------------------------------
// Dense eigenvalues: balance + Hessenberg + Francis double-shift QR
// ---------------------------------------------------------------------------

namespace {

// Similarity scaling by powers of two to bring row and column norms
// close together. Exact in floating point, eigenvalues unchanged.
void balance(Matrix& a) {
    const int n = a.rows();
    const double radix = 2.0, sqrdx = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (int i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix, f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                const double ginv = 1.0 / f;
                for (int j = 0; j < n; ++j) a(i, j) *= ginv;
                for (int j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
}

// Householder reduction to upper Hessenberg form, eigenvalues-only
// variant (no transform accumulation).
void hessenberg(Matrix& h) {
    const int n = h.rows();
    std::vector<double> ort(static_cast<size_t>(n), 0.0);
    for (int m = 1; m <= n - 2; ++m) {
        double scale = 0.0;
        for (int i = m; i < n; ++i) scale += std::abs(h(i, m - 1));
        if (scale == 0.0) continue;

        double hh = 0.0;
        for (int i = n - 1; i >= m; --i) {
            ort[static_cast<size_t>(i)] = h(i, m - 1) / scale;
            hh += ort[static_cast<size_t>(i)] * ort[static_cast<size_t>(i)];
        }
        double g = std::sqrt(hh);
        if (ort[static_cast<size_t>(m)] > 0.0) g = -g;
        hh -= ort[static_cast<size_t>(m)] * g;
        ort[static_cast<size_t>(m)] -= g;

        // Apply the reflector from the left, then the right.
        for (int j = m; j < n; ++j) {
            double f = 0.0;
            for (int i = n - 1; i >= m; --i) f += ort[static_cast<size_t>(i)] * h(i, j);
            f /= hh;
            for (int i = m; i < n; ++i) h(i, j) -= f * ort[static_cast<size_t>(i)];
        }
        for (int i = 0; i < n; ++i) {
            double f = 0.0;
            for (int j = n - 1; j >= m; --j) f += ort[static_cast<size_t>(j)] * h(i, j);
            f /= hh;
            for (int j = m; j < n; ++j) h(i, j) -= f * ort[static_cast<size_t>(j)];
        }
        h(m, m - 1) = scale * g;
    }
    // Entries below the first subdiagonal are no longer referenced.
    for (int i = 2; i < n; ++i)
        for (int j = 0; j < i - 1; ++j) h(i, j) = 0.0;
}

// Francis double-shift QR iteration on an upper Hessenberg matrix;
// eigenvalues only. Classic EISPACK/JAMA hqr organization.
std::vector<std::complex<double>> hqr(Matrix& h, std::uint64_t tag) {
    const int size = h.rows();
    const double eps = std::numeric_limits<double>::epsilon();
    std::vector<std::complex<double>> eig;
    eig.reserve(static_cast<size_t>(size));

    double norm = 0.0;
    for (int i = 0; i < size; ++i)
        for (int j = std::max(i - 1, 0); j < size; ++j) norm += std::abs(h(i, j));
    if (norm == 0.0) return std::vector<std::complex<double>>(static_cast<size_t>(size), 0.0);

    int n = size - 1;
    double exshift = 0.0;
    double p = 0, q = 0, r = 0, s = 0, z = 0, w, x, y;
    int iter = 0;
    long total_iter = 0;
    const long iter_cap = 40L * size + 100;

    while (n >= 0) {
        // Look for a single small subdiagonal element.
        int l = n;
        while (l > 0) {
            s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
            if (s == 0.0) s = norm;
            if (std::abs(h(l, l - 1)) < eps * s) break;
            --l;
        }

        if (l == n) {
            // One real root found.
            eig.emplace_back(h(n, n) + exshift, 0.0);
            --n;
            iter = 0;
        } else if (l == n - 1) {
            // Two roots found (real pair or complex conjugate pair).
            w = h(n, n - 1) * h(n - 1, n);
            p = (h(n - 1, n - 1) - h(n, n)) / 2.0;
            q = p * p + w;
            z = std::sqrt(std::abs(q));
            x = h(n, n) + exshift;
            if (q >= 0.0) {
                z = (p >= 0.0) ? p + z : p - z;
                eig.emplace_back(x + z, 0.0);
                eig.emplace_back((z != 0.0) ? x - w / z : x + z, 0.0);
            } else {
                eig.emplace_back(x + p, z);
                eig.emplace_back(x + p, -z);
            }
            n -= 2;
            iter = 0;
        } else {
            // Form shift.
            x = h(n, n);
            y = h(n - 1, n - 1);
            w = h(n, n - 1) * h(n - 1, n);

            if (iter == 10 || iter == 20) {
                // Exceptional shift.
                exshift += x;
                for (int i = l; i <= n; ++i) h(i, i) -= x;
                s = std::abs(h(n, n - 1)) + std::abs(h(n - 1, n - 2));
                x = y = 0.75 * s;
                w = -0.4375 * s * s;
            }
            ++iter;
            if (++total_iter > iter_cap) {
                char buf[96];
                std::snprintf(buf, sizeof(buf),
                              "eigenvalue QR iteration stalled (matrix fnv1a=%016llx)",
                              static_cast<unsigned long long>(tag));
                throw NumericalFailure(buf);
            }

            // Look for two consecutive small subdiagonal elements.
            int m = n - 2;
            while (m >= l) {
                z = h(m, m);
                r = x - z;
                s = y - z;
                p = (r * s - w) / h(m + 1, m) + h(m, m + 1);
                q = h(m + 1, m + 1) - z - r - s;
                r = h(m + 2, m + 1);
                s = std::abs(p) + std::abs(q) + std::abs(r);
                p /= s;
                q /= s;
                r /= s;
                if (m == l) break;
                if (std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r)) <
                    eps * (std::abs(p) *
                           (std::abs(h(m - 1, m - 1)) + std::abs(z) + std::abs(h(m + 1, m + 1)))))
                    break;
                --m;
            }
            for (int i = m + 2; i <= n; ++i) {
                h(i, i - 2) = 0.0;
                if (i > m + 2) h(i, i - 3) = 0.0;
            }

            // Double QR step on rows l..n and columns m..n.
            for (int k = m; k <= n - 1; ++k) {
                const bool notlast = (k != n - 1);
                if (k != m) {
                    p = h(k, k - 1);
                    q = h(k + 1, k - 1);
                    r = notlast ? h(k + 2, k - 1) : 0.0;
                    x = std::abs(p) + std::abs(q) + std::abs(r);
                    if (x == 0.0) continue;
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = std::sqrt(p * p + q * q + r * r);
                if (p < 0.0) s = -s;
                if (s == 0.0) continue;
                if (k != m)
                    h(k, k - 1) = -s * x;
                else if (l != m)
                    h(k, k - 1) = -h(k, k - 1);
                p += s;
                x = p / s;
                y = q / s;
                z = r / s;
                q /= p;
                r /= p;

                // Row modification.
                for (int j = k; j <= n; ++j) {
                    double f = h(k, j) + q * h(k + 1, j);
                    if (notlast) f += r * h(k + 2, j);
                    h(k, j) -= f * x;
                    h(k + 1, j) -= f * y;
                    if (notlast) h(k + 2, j) -= f * z;
                }

                // Column modification.
                const int upper = std::min(n, k + 3);
                for (int i = l; i <= upper; ++i) {
                    double f = x * h(i, k) + y * h(i, k + 1);
                    if (notlast) f += z * h(i, k + 2);
                    h(i, k) -= f;
                    h(i, k + 1) -= f * q;
                    if (notlast) h(i, k + 2) -= f * r;
                }
            }
        }
    }
    return eig;
}

}  // namespace

std::vector<std::complex<double>> eigenvalues(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix must be square");
    if (m.rows() > 500) throw std::invalid_argument("eigenvalues: n > 500 unsupported");
    if (!m.all_finite()) throw std::invalid_argument("eigenvalues: non-finite entries");
    const int n = m.rows();
    if (n == 0) return {};
    if (n == 1) return {std::complex<double>(m(0, 0), 0.0)};

    const std::uint64_t tag = matrix_fnv1a(m);
    Matrix h = m;
    balance(h);
    hessenberg(h);
    return hqr(h, tag);
}

std::vector<double> left_null_vector(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("left_null_vector: matrix must be square");
    const int n = m.rows();
    const auto lu = LuDecomposition::compute(m.transposed());

    std::vector<double> y(static_cast<size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
    for (int pass = 0; pass < 3; ++pass) {
        y = lu.solve(y);
        const double nrm = norm2(y);
        if (nrm == 0.0 || !std::isfinite(nrm)) {
            // Restart from a skewed direction if the start vector was
            // pathologically aligned.
            y.assign(static_cast<size_t>(n), 0.0);
            y[0] = 1.0;
            continue;
        }
        for (double& v : y) v /= nrm;
    }
    return y;
}

}  // namespace ks
