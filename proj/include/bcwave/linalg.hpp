#pragma once

#include <cstddef>
#include <vector>

namespace bcwave {

/// Cholesky factorization/solve for a small symmetric positive-definite
/// matrix (row-major n*n). `shift` is added to the diagonal before
/// factorizing (Tikhonov regularization of Gram systems). Throws
/// IllConditioned when a pivot is not positive.
class CholeskyFactor {
public:
    CholeskyFactor(const std::vector<double>& A, std::size_t n, double shift = 0.0);

    std::vector<double> solve(const std::vector<double>& rhs) const;
    /// Column-major pack of k right-hand sides, solved independently.
    std::vector<double> solve_many(const std::vector<double>& rhs, std::size_t k) const;

    std::size_t dim() const { return n_; }
    double pivot(std::size_t i) const { return L_[i * n_ + i]; }

private:
    std::vector<double> L_; // lower triangle, row-major
    std::size_t n_;
};

/// Least-squares solution of an m x 2 system [a | b] z = r by normal
/// equations with column equilibration.
struct Fit2 {
    double z0 = 0.0;
    double z1 = 0.0;
    double cond = 0.0;     // condition estimate of the equilibrated normal matrix
    double residual = 0.0; // l2 norm of the residual
};
Fit2 lstsq2(const std::vector<double>& a, const std::vector<double>& b,
            const std::vector<double>& r);

} // namespace bcwave
