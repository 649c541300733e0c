#pragma once

#include <cstddef>
#include <vector>

namespace bcwave {

/// Boundary control f sampled on t_j = j*h. f(0) = 0 and f vanishes on an
/// initial segment (support in (0, inf)).
struct Control {
    std::vector<double> samples;
    double h = 0.0;

    double T() const { return h * double(samples.empty() ? 0 : samples.size() - 1); }
    /// Sample with zero extension beyond the stored horizon.
    double at(std::size_t j) const { return j < samples.size() ? samples[j] : 0.0; }
};

} // namespace bcwave
