#pragma once

// Dense complex Hermitian operator algebra on multipartite spaces.
//
// Every operator carries the list of its subsystem dimensions together with
// the set of subsystems that belong to party B. Partial transposition always
// acts on the B subsystems.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "mrd/errors.hpp"

namespace mrd {

template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RealVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using Matrix = ComplexMatrix<double>;
using RealVector = RealVectorT<double>;

struct Tolerances {
  static constexpr double hermiticity = 1e-12;
  static constexpr double psd = 1e-10;
  static constexpr double trace = 1e-10;
  static constexpr double zero_floor = 1e-15;
};

/// Default cap on the total Hilbert-space dimension of any constructed operator.
inline constexpr int kMaxTotalDimension = 4096;

/// Kronecker product of two dense matrices.
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Largest absolute entry.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : static_cast<double>(m.cwiseAbs().maxCoeff());
}

/// Partial transpose of a raw matrix on the listed subsystems.
template <typename Derived>
auto partial_transpose_raw(const Eigen::MatrixBase<Derived>& m, std::span<const int> dims,
                           std::span<const int> transposed) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = m.rows();
  const std::size_t k = dims.size();
  std::vector<Eigen::Index> stride(k, 1);
  for (std::size_t s = k; s-- > 1;) stride[s - 1] = stride[s] * dims[s];
  std::vector<char> flip(k, 0);
  for (int t : transposed) flip[static_cast<std::size_t>(t)] = 1;

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      Eigen::Index r2 = 0, c2 = 0, rr = r, cc = c;
      for (std::size_t s = 0; s < k; ++s) {
        const Eigen::Index ri = rr / stride[s], ci = cc / stride[s];
        rr %= stride[s];
        cc %= stride[s];
        if (flip[s]) {
          r2 += ci * stride[s];
          c2 += ri * stride[s];
        } else {
          r2 += ri * stride[s];
          c2 += ci * stride[s];
        }
      }
      out(r2, c2) = m(r, c);
    }
  }
  return out;
}

class HermitianOp {
 public:
  HermitianOp() = default;

  /// Hermitizes `data` as (X + X^dag)/2; throws DomainError when the
  /// anti-Hermitian part exceeds the hermiticity tolerance (relative to the
  /// largest entry once that exceeds 1).
  HermitianOp(Matrix data, std::vector<int> dims, std::vector<int> b_indices = {});

  /// Single-system operator; dims = {rows}.
  explicit HermitianOp(Matrix data);

  static HermitianOp identity(std::vector<int> dims, std::vector<int> b_indices = {});
  static HermitianOp zero(std::vector<int> dims, std::vector<int> b_indices = {});
  static HermitianOp diagonal(const RealVector& diag, std::vector<int> dims = {},
                              std::vector<int> b_indices = {});

  const Matrix& matrix() const { return data_; }
  int dim() const { return static_cast<int>(data_.rows()); }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<int>& b_indices() const { return b_indices_; }
  bool has_bipartition() const { return !b_indices_.empty(); }

  /// Product of the A-side (non-B) and B-side subsystem dimensions.
  int dim_a() const;
  int dim_b() const;

  HermitianOp with_bipartition(std::vector<int> b_indices) const;

  double trace() const { return data_.trace().real(); }
  double max_norm() const { return max_abs(data_); }
  double frobenius_norm() const { return data_.norm(); }

  HermitianOp& operator+=(const HermitianOp& other);
  HermitianOp& operator-=(const HermitianOp& other);
  HermitianOp& operator*=(double s);

  friend HermitianOp operator+(HermitianOp a, const HermitianOp& b) { return a += b; }
  friend HermitianOp operator-(HermitianOp a, const HermitianOp& b) { return a -= b; }
  friend HermitianOp operator*(HermitianOp a, double s) { return a *= s; }
  friend HermitianOp operator*(double s, HermitianOp a) { return a *= s; }

 private:
  void check_layout() const;
  void require_same_layout(const HermitianOp& other) const;

  Matrix data_;
  std::vector<int> dims_;
  std::vector<int> b_indices_;
};

/// tr[A B] for Hermitian A, B (real by construction).
double inner(const HermitianOp& a, const HermitianOp& b);
double inner(const Matrix& a, const Matrix& b);

/// Density operator: PSD within psd_tol and unit trace within trace_tol.
class DensityOp {
 public:
  DensityOp() = default;
  explicit DensityOp(HermitianOp op);

  const HermitianOp& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  int dim() const { return op_.dim(); }
  const std::vector<int>& dims() const { return op_.dims(); }

 private:
  HermitianOp op_;
};

struct Spectrum {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // columns
};

/// Kronecker product; dims concatenated, B indices of the right factor shifted.
HermitianOp tensor(const HermitianOp& a, const HermitianOp& b);

/// Transposes every B subsystem. Throws StructuralError without a bipartition.
HermitianOp partial_transpose(const HermitianOp& x);

/// Traces out every subsystem not listed in `keep`.
HermitianOp partial_trace(const HermitianOp& x, const std::vector<int>& keep);

/// Reorders subsystems: new subsystem k is old subsystem order[k].
HermitianOp permute_subsystems(const HermitianOp& x, const std::vector<int>& order);

/// Ascending eigen-decomposition. Throws SolverError on non-convergence.
Spectrum eig_herm(const HermitianOp& x);
Spectrum eig_herm(const Matrix& x);

/// Applies f on the spectrum. Eigenvalues below `domain_floor` raise a
/// DomainError naming the offending eigenvalue.
HermitianOp herm_fn(const HermitianOp& x, const std::function<double(double)>& f,
                    double domain_floor = -std::numeric_limits<double>::infinity());

/// Reassembles V diag(values) V^dag.
Matrix from_spectrum(const Matrix& vectors, const RealVector& values);

/// Nearest PSD matrix in Frobenius norm (eigenvalues clipped at 0).
HermitianOp project_psd(const HermitianOp& x);

/// Nearest matrix with all eigenvalues >= floor.
Matrix project_floor(const Matrix& x, double floor);

struct PptProjection {
  HermitianOp result;
  int iterations = 0;
  bool converged = false;  // iterates settled and both constraints met
  double psd_violation = 0.0;  // max(0, floor - lambda_min(result))
  double ppt_violation = 0.0;  // max(0, -lambda_min(result^Gamma))
};

/// Dykstra projection onto {w >= floor*1, w^Gamma >= 0}. Returns the final
/// iterate even when the cap is reached; callers decide whether that is fatal.
PptProjection dykstra_ppt(const HermitianOp& x, double floor, double tol, int max_iter);

/// Projection onto the PPT cone; throws SolverError when the cap is reached.
HermitianOp project_ppt_cone(const HermitianOp& x, double tol = 1e-9, int max_iter = 5000);

double lambda_min(const HermitianOp& x);
double lambda_max(const HermitianOp& x);

}  // namespace mrd
