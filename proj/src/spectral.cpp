#include "bcwave/spectral.hpp"

#include <cmath>

#include "bcwave/errors.hpp"
#include "bcwave/grid.hpp"
#include "bcwave/sl_core.hpp"
#include "bcwave/sl_grid.hpp"

namespace bcwave {

SpectralMeasure truncated_measure(const Potential& q, double X, double Lambda_max) {
    if (X > q.X_max() + 1e-12) throw GridMismatch("X exceeds the potential grid");
    return grid_truncated_measure(q.samples(), q.h(), X, Lambda_max);
}

SpectralImage phi_transform(const std::vector<double>& y, const Potential& q,
                            const SpectralMeasure& mu) {
    SpectralImage img;
    img.values.assign(mu.size(), 0.0);
    for (std::size_t n = 0; n < mu.size(); ++n) {
        const PsiSolution sol = solve_psi(q, mu.nodes[n]);
        img.values[n] = trapezoid_product(y, sol.psi, q.h());
    }
    return img;
}

} // namespace bcwave
