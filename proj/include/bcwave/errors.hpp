#pragma once

#include <stdexcept>
#include <string>

namespace bcwave {

/// Base for all typed domain errors. `name` is the stable identifier printed
/// by the CLI on exit code 1.
struct DomainError : std::runtime_error {
    DomainError(std::string name_, const std::string& what_)
        : std::runtime_error(name_ + ": " + what_), name(std::move(name_)) {}
    std::string name;
};

struct NoDecayingSolution : DomainError {
    explicit NoDecayingSolution(const std::string& w) : DomainError("NoDecayingSolution", w) {}
};

struct DegenerateEta : DomainError {
    explicit DegenerateEta(const std::string& w) : DomainError("DegenerateEta", w) {}
};

struct GridMismatch : DomainError {
    explicit GridMismatch(const std::string& w) : DomainError("GridMismatch", w) {}
};

struct NonConvergence : DomainError {
    explicit NonConvergence(const std::string& w) : DomainError("NonConvergence", w) {}
};

struct GaugeZero : DomainError {
    explicit GaugeZero(const std::string& w) : DomainError("GaugeZero", w) {}
};

struct IllConditioned : DomainError {
    explicit IllConditioned(const std::string& w) : DomainError("IllConditioned", w) {}
};

struct RankCollapse : DomainError {
    explicit RankCollapse(const std::string& w) : DomainError("RankCollapse", w) {}
};

struct NoEigenvalues : DomainError {
    explicit NoEigenvalues(const std::string& w) : DomainError("NoEigenvalues", w) {}
};

} // namespace bcwave
