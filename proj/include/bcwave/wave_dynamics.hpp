#pragma once

#include <vector>

#include "bcwave/control.hpp"
#include "bcwave/potential.hpp"

namespace bcwave {

/// u(x_i, t_j) stored row-per-time-level: values[j][i].
struct WaveField {
    std::vector<std::vector<double>> values;
    double h = 0.0;

    std::size_t time_levels() const { return values.size(); }
    std::size_t space_nodes() const { return values.empty() ? 0 : values.front().size(); }
    const std::vector<double>& slice(std::size_t j) const { return values[j]; }
    const std::vector<double>& final_slice() const { return values.back(); }
};

/// Triangular transmutation kernel w(x_i, s_j), 0 <= x <= s <= T.
/// Internally solved in characteristic coordinates; `at(i,j)` addresses the
/// physical grid.
class GoursatKernel {
public:
    GoursatKernel() = default;
    GoursatKernel(std::vector<double> data, std::size_t m, double h)
        : w_(std::move(data)), m_(m), h_(h) {}

    double h() const { return h_; }
    std::size_t levels() const { return m_ + 1; } // grid nodes on [0,T]
    double T() const { return h_ * double(m_); }

    /// w(x_i, s_j); zero outside the triangle i <= j <= levels-1.
    double at(std::size_t i, std::size_t j) const {
        if (i > j || j > m_) return 0.0;
        return w_[i * (m_ + 1) + j];
    }
    double& ref(std::size_t i, std::size_t j) { return w_[i * (m_ + 1) + j]; }

private:
    std::vector<double> w_;
    std::size_t m_ = 0;
    double h_ = 0.0;
};

/// Leapfrog solution of u_tt - u_xx + q u = 0, u(0,t) = f(t), zero initial
/// data, on the CFL = 1 grid (time step equals space step).
WaveField forward_fd(const Potential& q, const Control& f, double T);

/// Transmutation kernel by successive approximation in characteristic
/// coordinates: w_ss - w_xx + q w = 0 on {0 <= x <= s <= T}, w(0,s) = 0,
/// w(x,x) = -(1/2) * integral_0^x q.
GoursatKernel goursat_kernel(const Potential& q, double T);

/// Evaluates u^f(x,t) = f(t-x) + integral_x^t w(x,s) f(t-s) ds by trapezoid
/// quadrature; both summands vanish for x > t.
WaveField forward_kernel(const GoursatKernel& w, const Control& f, double T);

/// Final slice only (cheaper than the full field).
std::vector<double> forward_kernel_slice(const GoursatKernel& w, const Control& f, double T);

/// Exact controllability: solves the second-kind Volterra equation
/// f(T-x) + integral_x^T w(x,s) f(T-s) ds = y(x) by backward substitution.
Control solve_control(const GoursatKernel& w, const std::vector<double>& y, double T);

/// Leapfrog for v_tt - v_xx + q v = g with v(0,t) = 0 and zero initial data.
/// g is sampled as g[j][i] on the space-time grid.
WaveField dual_forward(const Potential& q, const std::vector<std::vector<double>>& g, double T);

/// Backward leapfrog from final data w(T) = 0, w_t(T) = y, Dirichlet at x=0.
/// Returned field is indexed forward in time: values[j] is the state at t_j.
WaveField dual_backward(const Potential& q, const std::vector<double>& y, double T);

} // namespace bcwave
