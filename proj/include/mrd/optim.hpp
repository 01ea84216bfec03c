#pragma once

// Derivative-free maximizers used by the measurement searches and the
// scalar programs.

#include <Eigen/Dense>

#include <functional>

namespace mrd {

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Maximizes f with the adaptive-parameter Nelder-Mead simplex. Stops when
/// the spread of simplex values drops below `tol` or after `max_evals`.
/// A value of +inf ends the search immediately.
NelderMeadResult nelder_mead_max(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& start, double step, int max_evals, double tol);

struct ScalarMax {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section maximization of a unimodal function on [lo, hi].
ScalarMax golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12,
                             int max_iter = 200);

/// Evaluates f on `points` equispaced nodes of [lo, hi] and refines around
/// the best node by golden section.
ScalarMax grid_then_golden_max(const std::function<double(double)>& f, double lo, double hi, int points);

}  // namespace mrd
