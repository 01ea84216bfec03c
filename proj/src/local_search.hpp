#pragma once

// Search over rank-one local measurements parameterized by unitaries
// U = exp(iH). Only the first d rows of each unitary are used, so a
// d' x d' unitary (d' >= d) yields a rank-one POVM with d' outcomes.

#include <cstdint>
#include <vector>

#include "mrd/bound.hpp"
#include "mrd/linops.hpp"

namespace mrd::detail {

/// rho and sigma with all A subsystems first and all B subsystems last.
struct AbPair {
  Matrix rho;
  Matrix sigma;
  int da = 0;
  int db = 0;
  std::vector<int> dims;       // subsystem dimensions in A-then-B order
  std::vector<int> b_indices;  // B subsystems in that order
  std::vector<int> order;      // new subsystem k is original subsystem order[k]
};

AbPair to_ab_order(const DensityOp& rho, const DensityOp& sigma);

/// exp(iH) with H Hermitian built from n^2 reals (diagonal, then real and
/// imaginary parts of the strict upper triangle).
Matrix unitary_from_params(const double* params, int n);

struct LocalFamily {
  int da = 0;
  int db = 0;
  int out_a = 0;        // outcomes on A (= size of the A unitary)
  int out_b = 0;        // outcomes on B per A outcome
  bool conditional = false;

  int param_count() const { return out_a * out_a + (conditional ? out_a : 1) * out_b * out_b; }
};

struct LocalMeasurement {
  Matrix w;                // da x out_a
  std::vector<Matrix> v;   // db x out_b, one per A outcome when conditional
};

LocalMeasurement decode(const LocalFamily& fam, const Eigen::VectorXd& params);

/// Outcome probabilities indexed x * out_b + y.
std::vector<double> local_statistics(const Matrix& state, const LocalMeasurement& m);

/// Merges outcomes where sigma sits at round-off level (<= 1e-13) and rho
/// carries at most 1e-9 into the outcome with the largest sigma weight. This
/// is a coarse-graining, so the value stays a lower bound, and it keeps
/// round-off zeros from reading as support violations.
void merge_negligible(std::vector<double>& mu, std::vector<double>& nu);

/// POVM on the original subsystem layout of the pair.
Povm to_povm(const AbPair& pair, const LocalFamily& fam, const LocalMeasurement& m, MeasurementClass tag);

struct SearchOutcome {
  Eigen::VectorXd params;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Multi-start Nelder-Mead maximization of the Renyi divergence of the
/// local statistics. Restart 0 starts at `start` (zeros when empty), the
/// others at random points seeded by seed + restart index.
SearchOutcome search_local(const AbPair& pair, const LocalFamily& fam, double alpha, int restarts, int max_evals,
                           std::uint64_t seed, double tol, const Eigen::VectorXd& start = {});

}  // namespace mrd::detail
