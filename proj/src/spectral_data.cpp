#include "bcwave/spectral_data.hpp"

#include <cmath>
#include <stdexcept>

#include "bcwave/csv.hpp"
#include "bcwave/errors.hpp"

namespace bcwave {

void SpectralMeasure::validate() const {
    if (nodes.size() != weights.size())
        throw std::invalid_argument("measure nodes/weights length mismatch");
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        if (!std::isfinite(nodes[n]) || !std::isfinite(weights[n]) || weights[n] <= 0.0)
            throw std::invalid_argument("measure entries must be finite with positive weights");
        if (n > 0 && nodes[n] <= nodes[n - 1])
            throw std::invalid_argument("measure nodes must be strictly increasing");
    }
}

SpectralMeasure SpectralMeasure::load_csv(const std::string& path) {
    const CsvTable table = read_csv(path);
    SpectralMeasure mu;
    for (const auto& row : table.rows) {
        if (row.size() < 2) throw std::invalid_argument("measure CSV needs (lambda, rho) rows");
        mu.nodes.push_back(row[0]);
        mu.weights.push_back(row[1]);
    }
    mu.validate();
    return mu;
}

void SpectralMeasure::save_csv(const std::string& path) const {
    std::vector<std::vector<double>> rows;
    rows.reserve(nodes.size());
    for (std::size_t n = 0; n < nodes.size(); ++n) rows.push_back({nodes[n], weights[n]});
    write_csv(path, {"lambda", "rho"}, rows);
}

double sine_kernel(double lambda, double t) {
    const double z = lambda * t * t;
    if (std::abs(z) < 1e-4) {
        // t * (1 - z/6 + z^2/120 - z^3/5040 + z^4/362880 - z^5/39916800)
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 6; ++k) {
            term *= -z / double(2 * k * (2 * k + 1));
            sum += term;
        }
        return t * sum;
    }
    if (lambda > 0.0) {
        const double r = std::sqrt(lambda);
        return std::sin(r * t) / r;
    }
    const double r = std::sqrt(-lambda);
    return std::sinh(r * t) / r;
}

double measure_inner(const SpectralImage& a, const SpectralImage& b, const SpectralMeasure& mu) {
    if (a.size() != mu.size() || b.size() != mu.size())
        throw GridMismatch("image/measure size mismatch");
    double s = 0.0;
    for (std::size_t n = 0; n < mu.size(); ++n) s += a.values[n] * b.values[n] * mu.weights[n];
    return s;
}

namespace {

SpectralImage image_of_samples(const std::vector<double>& f, double h, double T,
                               const SpectralMeasure& mu) {
    const auto M = std::size_t(std::lround(T / h));
    SpectralImage img;
    img.values.assign(mu.size(), 0.0);
    for (std::size_t n = 0; n < mu.size(); ++n) {
        const double lambda = mu.nodes[n];
        double s = 0.0;
        // trapezoid; the kernel vanishes at s = T and f vanishes at s = 0
        for (std::size_t j = 1; j < M; ++j) {
            const double fj = j < f.size() ? f[j] : 0.0;
            s += sine_kernel(lambda, T - double(j) * h) * fj;
        }
        s += 0.5 * sine_kernel(lambda, T) * f[0];
        img.values[n] = s * h;
    }
    return img;
}

} // namespace

SpectralImage wave_image(const Control& f, double T, const SpectralMeasure& mu) {
    if (f.h <= 0.0) throw GridMismatch("control grid step must be positive");
    return image_of_samples(f.samples, f.h, T, mu);
}

SpectralImage wave_image_second(const Control& f, double T, const SpectralMeasure& mu) {
    if (f.h <= 0.0) throw GridMismatch("control grid step must be positive");
    const auto M = std::size_t(std::lround(T / f.h));
    std::vector<double> fpp(M + 1, 0.0);
    const double h2 = f.h * f.h;
    for (std::size_t j = 1; j < M; ++j)
        fpp[j] = (f.at(j + 1) - 2.0 * f.at(j) + f.at(j - 1)) / h2;
    SpectralImage img = image_of_samples(fpp, f.h, T, mu);
    for (double& v : img.values) v = -v;
    return img;
}

std::vector<double> gram(const std::vector<SpectralImage>& images, const SpectralMeasure& mu) {
    const std::size_t n = images.size();
    std::vector<double> G(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = measure_inner(images[i], images[j], mu);
            G[i * n + j] = v;
            G[j * n + i] = v;
        }
    return G;
}

} // namespace bcwave
