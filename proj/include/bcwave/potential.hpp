#pragma once
#define BCWAVE_POTENTIAL_HPP 1 // inverse-side translation units assert this is absent

#include <optional>
#include <string>
#include <vector>

namespace bcwave {

/// Sampled smooth potential q on the uniform grid x_i = i*h, i = 0..N.
/// Between nodes q is evaluated by cubic interpolation. The positivity
/// certificate (min q > 0, or a user-supplied kappa > 0) gates every use
/// that relies on positive definiteness.
class Potential {
public:
    Potential(std::vector<double> samples, double h);

    static Potential constant(double c, double X_max, double h);
    /// q(x) = c + amp * exp(-(x-center)^2 / width)
    static Potential bump(double c, double amp, double center, double width, double X_max,
                          double h);
    /// "const:c" or "bump:c,amp,center,width" (grid supplied separately).
    static Potential named(const std::string& spec, double X_max, double h);
    /// Two-column CSV (x, q(x)); x must be the uniform grid starting at 0.
    static Potential load_csv(const std::string& path);

    double operator()(double x) const;
    const std::vector<double>& samples() const { return q_; }
    double h() const { return h_; }
    double X_max() const { return X_max_; }
    std::size_t nodes() const { return q_.size(); }

    double min_value() const;
    /// True when min q > 0 or an explicit kappa has been supplied.
    bool certified() const;
    void set_kappa(double kappa);
    /// Positive-definiteness lower bound used by solvers: max(min q, kappa).
    double kappa_floor() const;

private:
    std::vector<double> q_;
    double h_;
    double X_max_;
    std::optional<double> kappa_;
};

} // namespace bcwave
