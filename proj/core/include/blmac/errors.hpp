#ifndef BLMAC_ERRORS_HPP
#define BLMAC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace blmac {

// Thrown when a water-filling problem has no channels to allocate over.
struct EmptyCandidateSet : std::invalid_argument {
  explicit EmptyCandidateSet(const std::string& what) : std::invalid_argument(what) {}
};

// Thrown when a water-filling budget is zero or negative.
struct NonpositiveBudget : std::invalid_argument {
  explicit NonpositiveBudget(const std::string& what) : std::invalid_argument(what) {}
};

// Base for failures of the numerical machinery (quadrature, root solving,
// Monte Carlo estimation). The CLI maps these to exit code 2.
struct NumericsError : std::runtime_error {
  explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative scheme ran out of its depth or iteration allowance before
// meeting the requested tolerance.
struct NonConvergence : NumericsError {
  explicit NonConvergence(const std::string& what) : NumericsError(what) {}
};

// A Monte Carlo estimate is too noisy to pin down the quantity it feeds.
struct MCVarianceTooHigh : NumericsError {
  explicit MCVarianceTooHigh(const std::string& what) : NumericsError(what) {}
};

}  // namespace blmac

#endif
