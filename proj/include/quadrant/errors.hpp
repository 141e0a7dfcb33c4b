#pragma once

#include <stdexcept>
#include <string>

namespace qatlas {

// Input outside the domain where a map or routine is defined.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Multistart search exhausted every seed without meeting the tolerance.
class SolverFailure : public std::runtime_error {
public:
  SolverFailure(const std::string &what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

private:
  double best_residual_;
};

// Curves closer than the integrand can tolerate.
class DegenerateGeometry : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace qatlas
