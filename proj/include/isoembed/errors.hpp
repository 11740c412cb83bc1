#pragma once

#include <stdexcept>
#include <string>

namespace isoembed {

/// Caller violated a documented precondition (wrong size, norm mismatch, ...).
class PreconditionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Input lies outside the domain where the operation is defined.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Iterative solver gave up. Carries the last residual norm.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

/// Ricci tensor at some grid point is outside the cone T_n, so no positive
/// second fundamental form solves the contracted Gauss equation there.
class EmbeddabilityObstruction : public DomainError {
  public:
    EmbeddabilityObstruction(const std::string& what, std::size_t point, double eps_gap)
        : DomainError(what), point_(point), eps_gap_(eps_gap) {}
    std::size_t point() const noexcept { return point_; }
    double eps_gap() const noexcept { return eps_gap_; }

  private:
    std::size_t point_;
    double eps_gap_;
};

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

} // namespace isoembed
