#include "bcwave/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bcwave/csv.hpp"
#include "bcwave/errors.hpp"
#include "bcwave/grid.hpp"

namespace bcwave {

Potential::Potential(std::vector<double> samples, double h) : q_(std::move(samples)), h_(h) {
    if (q_.size() < 2 || h_ <= 0.0)
        throw std::invalid_argument("Potential needs >= 2 samples and h > 0");
    for (double v : q_) {
        if (!std::isfinite(v)) throw std::invalid_argument("Potential sample not finite");
    }
    X_max_ = h_ * double(q_.size() - 1);
}

Potential Potential::constant(double c, double X_max, double h) {
    const std::size_t n = std::size_t(std::lround(X_max / h)) + 1;
    return Potential(std::vector<double>(n, c), h);
}

Potential Potential::bump(double c, double amp, double center, double width, double X_max,
                          double h) {
    const std::size_t n = std::size_t(std::lround(X_max / h)) + 1;
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = double(i) * h;
        q[i] = c + amp * std::exp(-(x - center) * (x - center) / width);
    }
    return Potential(std::move(q), h);
}

Potential Potential::named(const std::string& spec, double X_max, double h) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    std::vector<double> args;
    if (colon != std::string::npos) {
        std::string rest = spec.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            std::size_t next = rest.find(',', pos);
            if (next == std::string::npos) next = rest.size();
            args.push_back(std::stod(rest.substr(pos, next - pos)));
            pos = next + 1;
        }
    }
    if (kind == "const" && args.size() == 1) return constant(args[0], X_max, h);
    if (kind == "bump" && args.size() == 4)
        return bump(args[0], args[1], args[2], args[3], X_max, h);
    throw std::invalid_argument("unknown potential spec: " + spec);
}

Potential Potential::load_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    if (table.rows.size() < 2 || table.rows.front().size() < 2)
        throw std::invalid_argument("potential CSV needs two columns (x, q)");
    const double h = table.rows[1][0] - table.rows[0][0];
    std::vector<double> q;
    q.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const double x = table.rows[i][0];
        if (std::abs(x - double(i) * h) > 1e-9 * std::max(1.0, std::abs(x)))
            throw GridMismatch("potential CSV grid is not uniform from 0");
        q.push_back(table.rows[i][1]);
    }
    return Potential(std::move(q), h);
}

double Potential::operator()(double x) const { return grid_interp_cubic(q_, h_, x); }

double Potential::min_value() const { return *std::min_element(q_.begin(), q_.end()); }

bool Potential::certified() const { return kappa_.has_value() || min_value() > 0.0; }

void Potential::set_kappa(double kappa) {
    if (kappa <= 0.0) throw std::invalid_argument("kappa must be positive");
    kappa_ = kappa;
}

double Potential::kappa_floor() const {
    if (kappa_) return *kappa_;
    return min_value();
}

} // namespace bcwave
