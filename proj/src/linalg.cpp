#include "bcwave/linalg.hpp"

#include <cmath>
#include <limits>

#include "bcwave/errors.hpp"

namespace bcwave {

CholeskyFactor::CholeskyFactor(const std::vector<double>& A, std::size_t n, double shift)
    : L_(n * n, 0.0), n_(n) {
    if (A.size() != n * n) throw GridMismatch("matrix size does not match dimension");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = A[i * n + j] + (i == j ? shift : 0.0);
            for (std::size_t k = 0; k < j; ++k) s -= L_[i * n + k] * L_[j * n + k];
            if (i == j) {
                if (s <= 0.0) throw IllConditioned("non-positive pivot in Cholesky");
                L_[i * n + i] = std::sqrt(s);
            } else {
                L_[i * n + j] = s / L_[j * n + j];
            }
        }
    }
}

std::vector<double> CholeskyFactor::solve(const std::vector<double>& rhs) const {
    return solve_many(rhs, 1);
}

std::vector<double> CholeskyFactor::solve_many(const std::vector<double>& rhs,
                                               std::size_t k) const {
    if (rhs.size() != n_ * k) throw GridMismatch("rhs size does not match dimension");
    std::vector<double> x(rhs);
    for (std::size_t c = 0; c < k; ++c) {
        double* v = x.data() + c * n_;
        for (std::size_t i = 0; i < n_; ++i) {
            double s = v[i];
            for (std::size_t j = 0; j < i; ++j) s -= L_[i * n_ + j] * v[j];
            v[i] = s / L_[i * n_ + i];
        }
        for (std::size_t i = n_; i-- > 0;) {
            double s = v[i];
            for (std::size_t j = i + 1; j < n_; ++j) s -= L_[j * n_ + i] * v[j];
            v[i] = s / L_[i * n_ + i];
        }
    }
    return x;
}

Fit2 lstsq2(const std::vector<double>& a, const std::vector<double>& b,
            const std::vector<double>& r) {
    const std::size_t m = a.size();
    if (b.size() != m || r.size() != m) throw GridMismatch("lstsq2 column length mismatch");

    double naa = 0.0, nbb = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        naa += a[i] * a[i];
        nbb += b[i] * b[i];
    }
    const double sa = naa > 0.0 ? 1.0 / std::sqrt(naa) : 1.0;
    const double sb = nbb > 0.0 ? 1.0 / std::sqrt(nbb) : 1.0;

    // equilibrated normal matrix [[1, g], [g, 1]] with g = <a,b> sa sb
    double ab = 0.0, ar = 0.0, br = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        ab += a[i] * b[i];
        ar += a[i] * r[i];
        br += b[i] * r[i];
    }
    const double g = ab * sa * sb;
    const double det = 1.0 - g * g;

    Fit2 fit;
    fit.cond = det > 0.0 ? (1.0 + std::abs(g)) / (1.0 - std::abs(g))
                         : std::numeric_limits<double>::infinity();
    if (naa == 0.0 || nbb == 0.0 || det <= 0.0)
        throw IllConditioned("degenerate 2x2 least-squares system");

    const double u = ar * sa, v = br * sb;
    const double y0 = (u - g * v) / det;
    const double y1 = (v - g * u) / det;
    fit.z0 = y0 * sa;
    fit.z1 = y1 * sb;

    double res2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double e = fit.z0 * a[i] + fit.z1 * b[i] - r[i];
        res2 += e * e;
    }
    fit.residual = std::sqrt(res2);
    return fit;
}

} // namespace bcwave
