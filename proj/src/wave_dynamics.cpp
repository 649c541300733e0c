#include "bcwave/wave_dynamics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bcwave/errors.hpp"
#include "bcwave/grid.hpp"

namespace bcwave {

namespace {

std::size_t steps_for(double T, double h) {
    const double m = T / h;
    const auto rounded = std::size_t(std::lround(m));
    if (std::abs(m - double(rounded)) > 1e-9 * std::max(1.0, m))
        throw GridMismatch("T is not a multiple of the grid step");
    return rounded;
}

void check_control_grid(const Potential& q, const Control& f) {
    if (std::abs(f.h - q.h()) > 1e-12 * std::max(1.0, q.h()))
        throw GridMismatch("control time step differs from the space step (CFL = 1 required)");
}

} // namespace

WaveField forward_fd(const Potential& q, const Control& f, double T) {
    check_control_grid(q, f);
    const double h = q.h();
    const std::size_t M = steps_for(T, h);
    const std::size_t N = q.nodes() - 1;
    if (T > q.X_max() + 1e-12) throw GridMismatch("T exceeds the spatial extent X_max");

    WaveField u;
    u.h = h;
    u.values.assign(M + 1, std::vector<double>(N + 1, 0.0));
    const auto& qs = q.samples();
    const double h2 = h * h;

    for (std::size_t j = 0; j <= M; ++j) u.values[j][0] = f.at(j);
    // first level: u_tt(x,0) = u_xx - q u = 0 away from the boundary
    for (std::size_t j = 1; j < M; ++j) {
        const auto& um = u.values[j - 1];
        const auto& u0 = u.values[j];
        auto& up = u.values[j + 1];
        for (std::size_t i = 1; i < N; ++i)
            up[i] = u0[i + 1] + u0[i - 1] - um[i] - h2 * qs[i] * u0[i];
        up[N] = 0.0; // beyond the light cone for T <= X_max
    }
    return u;
}

GoursatKernel goursat_kernel(const Potential& q, double T) {
    const double h = q.h();
    if (T > q.X_max() + 1e-12) throw GridMismatch("kernel horizon exceeds X_max");
    const std::size_t M = steps_for(T, h);

    // characteristic coordinates xi = s - x, eta = s + x; the kernel solves
    //   4 W_xi_eta + q((eta - xi)/2) W = 0,
    //   W(0, eta) = d(eta/2),  W(xi, xi) = 0,   d(x) = -(1/2) int_0^x q,
    // equivalent to the Volterra equation
    //   W(xi,eta) = d(eta/2) - d(xi/2) - (1/4) int_0^xi int_xi^eta c W.
    const std::size_t L = 2 * M; // eta grid 0..2M, xi grid 0..M
    std::vector<double> qh(L + 1), d(L + 1);
    for (std::size_t l = 0; l <= L; ++l) qh[l] = q(double(l) * h / 2.0);
    d[0] = 0.0;
    for (std::size_t l = 1; l <= L; ++l)
        d[l] = d[l - 1] - 0.5 * 0.5 * (qh[l - 1] + qh[l]) * (h / 2.0);

    const std::size_t W_cols = L + 1;
    auto idx = [W_cols](std::size_t k, std::size_t l) { return k * W_cols + l; };
    std::vector<double> W((M + 1) * W_cols, 0.0);
    std::vector<double> S((M + 1) * W_cols, 0.0);
    std::vector<double> A((M + 1) * W_cols, 0.0);

    // initial iterate = the data term
    for (std::size_t k = 0; k <= M; ++k)
        for (std::size_t l = k; l <= L - k; ++l) W[idx(k, l)] = d[l] - d[k];

    double prev_diff = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int iter = 0; iter < 80; ++iter) {
        // S(k,l) = int_{xi_k}^{eta_l} c(k,.) W(k,.) deta, trapezoid
        for (std::size_t k = 0; k <= M; ++k) {
            S[idx(k, k)] = 0.0;
            double prev = qh[0] * W[idx(k, k)];
            for (std::size_t l = k + 1; l <= L - k; ++l) {
                const double cur = qh[l - k] * W[idx(k, l)];
                S[idx(k, l)] = S[idx(k, l - 1)] + 0.5 * h * (prev + cur);
                prev = cur;
            }
        }
        // A(k,l) = int_0^{xi_k} S(k',l) dxi', trapezoid in k
        for (std::size_t l = 0; l <= L; ++l) A[idx(0, l)] = 0.0;
        for (std::size_t k = 1; k <= M; ++k)
            for (std::size_t l = k; l <= L - k; ++l)
                A[idx(k, l)] = A[idx(k - 1, l)] + 0.5 * h * (S[idx(k - 1, l)] + S[idx(k, l)]);

        double diff = 0.0, scale = 0.0;
        for (std::size_t k = 0; k <= M; ++k) {
            const double diag = A[idx(k, k)];
            for (std::size_t l = k; l <= L - k; ++l) {
                const double next = d[l] - d[k] - 0.25 * (A[idx(k, l)] - diag);
                diff = std::max(diff, std::abs(next - W[idx(k, l)]));
                scale = std::max(scale, std::abs(next));
                W[idx(k, l)] = next;
            }
        }
        if (diff <= 1e-13 * (1.0 + scale)) {
            converged = true;
            break;
        }
        if (iter > 6 && diff > prev_diff)
            throw NonConvergence("characteristic iteration stopped contracting; refine the grid");
        prev_diff = diff;
    }
    if (!converged)
        throw NonConvergence("characteristic iteration did not converge; T too large for this q");

    // back to the physical grid: w(x_i, s_j) = W(j - i, j + i)
    std::vector<double> data((M + 1) * (M + 1), 0.0);
    for (std::size_t i = 0; i <= M; ++i)
        for (std::size_t j = i; j <= M; ++j) data[i * (M + 1) + j] = W[idx(j - i, j + i)];
    return GoursatKernel(std::move(data), M, h);
}

namespace {

double kernel_row_quadrature(const GoursatKernel& w, const Control& f, std::size_t i,
                             std::size_t j) {
    // trapezoid of w(x_i, s) f(t_j - s) over s in [x_i, t_j]
    if (j <= i) return 0.0;
    const double h = w.h();
    double s = 0.5 * (w.at(i, i) * f.at(j - i) + w.at(i, j) * f.at(0));
    for (std::size_t l = i + 1; l < j; ++l) s += w.at(i, l) * f.at(j - l);
    return s * h;
}

} // namespace

WaveField forward_kernel(const GoursatKernel& w, const Control& f, double T) {
    const double h = w.h();
    if (std::abs(f.h - h) > 1e-12) throw GridMismatch("control step differs from kernel step");
    const std::size_t M = steps_for(T, h);
    if (M + 1 > w.levels()) throw GridMismatch("kernel horizon shorter than requested T");

    WaveField u;
    u.h = h;
    u.values.assign(M + 1, std::vector<double>(M + 1, 0.0));
    for (std::size_t j = 0; j <= M; ++j)
        for (std::size_t i = 0; i <= j; ++i)
            u.values[j][i] = f.at(j - i) + kernel_row_quadrature(w, f, i, j);
    return u;
}

std::vector<double> forward_kernel_slice(const GoursatKernel& w, const Control& f, double T) {
    const double h = w.h();
    if (std::abs(f.h - h) > 1e-12) throw GridMismatch("control step differs from kernel step");
    const std::size_t M = steps_for(T, h);
    if (M + 1 > w.levels()) throw GridMismatch("kernel horizon shorter than requested T");
    std::vector<double> slice(M + 1, 0.0);
    for (std::size_t i = 0; i <= M; ++i)
        slice[i] = f.at(M - i) + kernel_row_quadrature(w, f, i, M);
    return slice;
}

Control solve_control(const GoursatKernel& w, const std::vector<double>& y, double T) {
    const double h = w.h();
    const std::size_t M = steps_for(T, h);
    if (M + 1 > w.levels()) throw GridMismatch("kernel horizon shorter than requested T");
    if (y.size() < M + 1) throw GridMismatch("target not sampled on the full [0,T] grid");

    // g(x) = f(T-x):  g(x) + int_x^T w(x,s) g(s) ds = y(x), backward substitution
    std::vector<double> g(M + 1, 0.0);
    g[M] = y[M];
    for (std::size_t ii = M; ii-- > 0;) {
        double acc = 0.5 * w.at(ii, M) * g[M];
        for (std::size_t l = ii + 1; l < M; ++l) acc += w.at(ii, l) * g[l];
        const double diag = 1.0 + 0.5 * h * w.at(ii, ii);
        g[ii] = (y[ii] - h * acc) / diag;
    }
    Control f;
    f.h = h;
    f.samples.resize(M + 1);
    for (std::size_t j = 0; j <= M; ++j) f.samples[j] = g[M - j];
    return f;
}

WaveField dual_forward(const Potential& q, const std::vector<std::vector<double>>& g, double T) {
    const double h = q.h();
    const std::size_t M = steps_for(T, h);
    const std::size_t N = q.nodes() - 1;
    for (const auto& row : g)
        if (row.size() != N + 1) throw GridMismatch("source rows do not match the space grid");
    if (g.size() < M) throw GridMismatch("source not sampled up to T");

    WaveField v;
    v.h = h;
    v.values.assign(M + 1, std::vector<double>(N + 1, 0.0));
    const auto& qs = q.samples();
    const double h2 = h * h;
    if (M >= 1)
        for (std::size_t i = 1; i < N; ++i) v.values[1][i] = 0.5 * h2 * g[0][i];
    for (std::size_t j = 1; j < M; ++j) {
        const auto& vm = v.values[j - 1];
        const auto& v0 = v.values[j];
        auto& vp = v.values[j + 1];
        for (std::size_t i = 1; i < N; ++i)
            vp[i] = v0[i + 1] + v0[i - 1] - vm[i] - h2 * qs[i] * v0[i] + h2 * g[j][i];
    }
    return v;
}

WaveField dual_backward(const Potential& q, const std::vector<double>& y, double T) {
    const double h = q.h();
    const std::size_t M = steps_for(T, h);
    const std::size_t N = q.nodes() - 1;
    if (y.size() != N + 1) throw GridMismatch("final velocity does not match the space grid");

    WaveField w;
    w.h = h;
    w.values.assign(M + 1, std::vector<double>(N + 1, 0.0));
    const auto& qs = q.samples();
    const double h2 = h * h;
    if (M >= 1) {
        // w(T) = 0, w_t(T) = y  =>  w(T-h) = -h y + O(h^3)
        for (std::size_t i = 1; i < N; ++i) w.values[M - 1][i] = -h * y[i];
    }
    for (std::size_t j = M - 1; j >= 1; --j) {
        const auto& wp = w.values[j + 1];
        const auto& w0 = w.values[j];
        auto& wm = w.values[j - 1];
        for (std::size_t i = 1; i < N; ++i)
            wm[i] = w0[i + 1] + w0[i - 1] - wp[i] - h2 * qs[i] * w0[i];
    }
    return w;
}

} // namespace bcwave
