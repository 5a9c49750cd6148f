#ifndef NOVIKOV_ERRORS_HPP
#define NOVIKOV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace novikov {

struct dimension_mismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct not_invertible : std::domain_error {
  using std::domain_error::domain_error;
};

struct invalid_params : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct no_intersection : std::domain_error {
  using std::domain_error::domain_error;
};

struct step_too_large : std::runtime_error {
  double error_estimate;
  explicit step_too_large(double est)
      : std::runtime_error("integration error estimate " + std::to_string(est) +
                           " exceeds tolerance budget"),
        error_estimate(est) {}
};

struct no_sign_change : std::domain_error {
  using std::domain_error::domain_error;
};

struct multiple_crossings : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two connecting orbits closer than the refinement floor; the gradient is too
// close to a non-transversal configuration at this resolution.
struct unresolved_orbit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct degenerate_critical : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct bound_violated : std::runtime_error {
  double t;
  bound_violated(const std::string& what, double t_) : std::runtime_error(what), t(t_) {}
};

}  // namespace novikov

#endif
