#include "mrd/linops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mrd {

namespace {

int product(const std::vector<int>& dims) {
  long long p = 1;
  for (int d : dims) {
    if (d < 1) throw StructuralError("subsystem dimension must be positive");
    p *= d;
    if (p > kMaxTotalDimension)
      throw ResourceError("total dimension exceeds cap of " + std::to_string(kMaxTotalDimension));
  }
  return static_cast<int>(p);
}

std::vector<Eigen::Index> strides(const std::vector<int>& dims) {
  std::vector<Eigen::Index> s(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) s[k - 1] = s[k] * dims[k];
  return s;
}

Matrix hermitize(const Matrix& m) {
  if (m.rows() != m.cols()) throw StructuralError("operator matrix must be square");
  const double scale = std::max(1.0, max_abs(m));
  const double skew = max_abs(m - m.adjoint());
  if (skew > Tolerances::hermiticity * scale) {
    std::ostringstream os;
    os << "matrix is not Hermitian: max |X - X^dag| = " << skew;
    throw DomainError(os.str());
  }
  return (m + m.adjoint()) * 0.5;
}

}  // namespace

HermitianOp::HermitianOp(Matrix data, std::vector<int> dims, std::vector<int> b_indices)
    : data_(hermitize(data)), dims_(std::move(dims)), b_indices_(std::move(b_indices)) {
  check_layout();
}

HermitianOp::HermitianOp(Matrix data) : data_(hermitize(data)), dims_{static_cast<int>(data.rows())} {
  check_layout();
}

void HermitianOp::check_layout() const {
  if (dims_.empty()) throw StructuralError("dims must be non-empty");
  if (product(dims_) != data_.rows())
    throw StructuralError("product of dims does not match matrix dimension");
  std::vector<char> seen(dims_.size(), 0);
  for (int b : b_indices_) {
    if (b < 0 || b >= static_cast<int>(dims_.size()))
      throw StructuralError("bipartition index out of range");
    if (seen[static_cast<std::size_t>(b)]++) throw StructuralError("duplicate bipartition index");
  }
}

void HermitianOp::require_same_layout(const HermitianOp& other) const {
  if (dims_ != other.dims_) throw StructuralError("operands have different subsystem dimensions");
}

HermitianOp HermitianOp::identity(std::vector<int> dims, std::vector<int> b_indices) {
  const int n = product(dims);
  return HermitianOp(Matrix::Identity(n, n), std::move(dims), std::move(b_indices));
}

HermitianOp HermitianOp::zero(std::vector<int> dims, std::vector<int> b_indices) {
  const int n = product(dims);
  return HermitianOp(Matrix::Zero(n, n), std::move(dims), std::move(b_indices));
}

HermitianOp HermitianOp::diagonal(const RealVector& diag, std::vector<int> dims,
                                  std::vector<int> b_indices) {
  if (dims.empty()) dims = {static_cast<int>(diag.size())};
  Matrix m = diag.cast<Complex>().asDiagonal();
  return HermitianOp(std::move(m), std::move(dims), std::move(b_indices));
}

int HermitianOp::dim_b() const {
  int p = 1;
  for (int b : b_indices_) p *= dims_[static_cast<std::size_t>(b)];
  return p;
}

int HermitianOp::dim_a() const { return dim() / dim_b(); }

HermitianOp HermitianOp::with_bipartition(std::vector<int> b_indices) const {
  HermitianOp out = *this;
  out.b_indices_ = std::move(b_indices);
  out.check_layout();
  return out;
}

HermitianOp& HermitianOp::operator+=(const HermitianOp& other) {
  require_same_layout(other);
  data_ = hermitize(data_ + other.data_);
  if (b_indices_.empty()) b_indices_ = other.b_indices_;
  return *this;
}

HermitianOp& HermitianOp::operator-=(const HermitianOp& other) {
  require_same_layout(other);
  data_ = hermitize(data_ - other.data_);
  if (b_indices_.empty()) b_indices_ = other.b_indices_;
  return *this;
}

HermitianOp& HermitianOp::operator*=(double s) {
  data_ *= s;
  return *this;
}

double inner(const Matrix& a, const Matrix& b) {
  // tr[AB] = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (a.array() * b.conjugate().array()).sum().real();
}

double inner(const HermitianOp& a, const HermitianOp& b) {
  if (a.dim() != b.dim()) throw StructuralError("inner product of operators with different dimension");
  return inner(a.matrix(), b.matrix());
}

DensityOp::DensityOp(HermitianOp op) : op_(std::move(op)) {
  const double lo = lambda_min(op_);
  if (lo < -Tolerances::psd) {
    std::ostringstream os;
    os << "density operator has negative eigenvalue " << lo;
    throw DomainError(os.str());
  }
  const double tr = op_.trace();
  if (std::abs(tr - 1.0) > Tolerances::trace) {
    std::ostringstream os;
    os << "density operator has trace " << tr;
    throw DomainError(os.str());
  }
}

HermitianOp tensor(const HermitianOp& a, const HermitianOp& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  product(dims);
  std::vector<int> bi = a.b_indices();
  for (int k : b.b_indices()) bi.push_back(k + static_cast<int>(a.dims().size()));
  return HermitianOp(kron(a.matrix(), b.matrix()), std::move(dims), std::move(bi));
}

HermitianOp partial_transpose(const HermitianOp& x) {
  if (!x.has_bipartition()) throw StructuralError("partial transpose requires a declared bipartition");
  return HermitianOp(partial_transpose_raw(x.matrix(), x.dims(), x.b_indices()), x.dims(),
                     x.b_indices());
}

HermitianOp partial_trace(const HermitianOp& x, const std::vector<int>& keep) {
  const auto& dims = x.dims();
  const int k = static_cast<int>(dims.size());
  std::vector<char> kept(static_cast<std::size_t>(k), 0);
  for (int i : keep) {
    if (i < 0 || i >= k) throw StructuralError("partial trace: subsystem index out of range");
    if (kept[static_cast<std::size_t>(i)]++) throw StructuralError("partial trace: duplicate index");
  }
  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());

  std::vector<int> out_dims, traced;
  for (int i : keep_sorted) out_dims.push_back(dims[static_cast<std::size_t>(i)]);
  for (int i = 0; i < k; ++i)
    if (!kept[static_cast<std::size_t>(i)]) traced.push_back(i);
  if (out_dims.empty()) out_dims = {1};

  const auto st = strides(dims);
  int n_keep = 1, n_traced = 1;
  for (int i : keep_sorted) n_keep *= dims[static_cast<std::size_t>(i)];
  for (int i : traced) n_traced *= dims[static_cast<std::size_t>(i)];

  // Full index offsets for each kept multi-index and each traced multi-index.
  auto offsets = [&](const std::vector<int>& subs, int count) {
    std::vector<Eigen::Index> off(static_cast<std::size_t>(count), 0);
    for (int idx = 0; idx < count; ++idx) {
      int rem = idx;
      Eigen::Index o = 0;
      for (std::size_t s = subs.size(); s-- > 0;) {
        const int d = dims[static_cast<std::size_t>(subs[s])];
        o += (rem % d) * st[static_cast<std::size_t>(subs[s])];
        rem /= d;
      }
      off[static_cast<std::size_t>(idx)] = o;
    }
    return off;
  };
  const auto keep_off = offsets(keep_sorted, n_keep);
  const auto trace_off = offsets(traced, n_traced);

  Matrix out = Matrix::Zero(n_keep, n_keep);
  for (int r = 0; r < n_keep; ++r)
    for (int c = 0; c < n_keep; ++c) {
      Complex acc = 0.0;
      for (int t = 0; t < n_traced; ++t)
        acc += x.matrix()(keep_off[static_cast<std::size_t>(r)] + trace_off[static_cast<std::size_t>(t)],
                          keep_off[static_cast<std::size_t>(c)] + trace_off[static_cast<std::size_t>(t)]);
      out(r, c) = acc;
    }

  std::vector<int> out_b;
  for (std::size_t j = 0; j < keep_sorted.size(); ++j)
    for (int b : x.b_indices())
      if (b == keep_sorted[j]) out_b.push_back(static_cast<int>(j));
  return HermitianOp(std::move(out), std::move(out_dims), std::move(out_b));
}

HermitianOp permute_subsystems(const HermitianOp& x, const std::vector<int>& order) {
  const auto& dims = x.dims();
  const std::size_t k = dims.size();
  if (order.size() != k) throw StructuralError("permutation length does not match subsystem count");
  std::vector<char> seen(k, 0);
  for (int o : order) {
    if (o < 0 || o >= static_cast<int>(k) || seen[static_cast<std::size_t>(o)]++)
      throw StructuralError("invalid subsystem permutation");
  }
  std::vector<int> new_dims(k);
  for (std::size_t j = 0; j < k; ++j) new_dims[j] = dims[static_cast<std::size_t>(order[j])];
  const auto old_st = strides(dims);
  const Eigen::Index n = x.dim();

  // map[new_index] = old_index
  std::vector<Eigen::Index> map(static_cast<std::size_t>(n));
  for (Eigen::Index idx = 0; idx < n; ++idx) {
    Eigen::Index rem = idx, old = 0;
    for (std::size_t j = k; j-- > 0;) {
      const int d = new_dims[j];
      old += (rem % d) * old_st[static_cast<std::size_t>(order[j])];
      rem /= d;
    }
    map[static_cast<std::size_t>(idx)] = old;
  }
  Matrix out(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      out(r, c) = x.matrix()(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]);

  std::vector<int> new_b;
  for (std::size_t j = 0; j < k; ++j)
    for (int b : x.b_indices())
      if (b == order[j]) new_b.push_back(static_cast<int>(j));
  return HermitianOp(std::move(out), std::move(new_dims), std::move(new_b));
}

Spectrum eig_herm(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x);
  if (es.info() != Eigen::Success) {
    const double residual = max_abs(x);
    throw SolverError("Hermitian eigensolver did not converge", residual);
  }
  return Spectrum{es.eigenvalues(), es.eigenvectors()};
}

Spectrum eig_herm(const HermitianOp& x) { return eig_herm(x.matrix()); }

Matrix from_spectrum(const Matrix& vectors, const RealVector& values) {
  return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

HermitianOp herm_fn(const HermitianOp& x, const std::function<double(double)>& f, double domain_floor) {
  Spectrum s = eig_herm(x);
  RealVector v(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double lam = s.eigenvalues(i);
    if (lam < domain_floor) {
      std::ostringstream os;
      os << "eigenvalue " << lam << " lies below the function domain floor " << domain_floor;
      throw DomainError(os.str());
    }
    v(i) = f(lam);
  }
  return HermitianOp(from_spectrum(s.eigenvectors, v), x.dims(), x.b_indices());
}

Matrix project_floor(const Matrix& x, double floor) {
  Spectrum s = eig_herm(x);
  if (s.eigenvalues.size() == 0 || s.eigenvalues(0) >= floor) return x;
  RealVector v = s.eigenvalues.cwiseMax(floor);
  Matrix out = from_spectrum(s.eigenvectors, v);
  return (out + out.adjoint()) * 0.5;
}

HermitianOp project_psd(const HermitianOp& x) {
  return HermitianOp(project_floor(x.matrix(), 0.0), x.dims(), x.b_indices());
}

double lambda_min(const HermitianOp& x) {
  return Eigen::SelfAdjointEigenSolver<Matrix>(x.matrix(), Eigen::EigenvaluesOnly).eigenvalues()(0);
}

double lambda_max(const HermitianOp& x) {
  const auto ev = Eigen::SelfAdjointEigenSolver<Matrix>(x.matrix(), Eigen::EigenvaluesOnly).eigenvalues();
  return ev(ev.size() - 1);
}

PptProjection dykstra_ppt(const HermitianOp& x, double floor, double tol, int max_iter) {
  if (!x.has_bipartition()) throw StructuralError("PPT projection requires a declared bipartition");
  const auto& dims = x.dims();
  const auto& bi = x.b_indices();
  auto pt = [&](const Matrix& m) { return partial_transpose_raw(m, dims, bi); };
  auto ppt_set = [&](const Matrix& m) { return pt(project_floor(pt(m), 0.0)); };
  auto min_eig = [](const Matrix& m) {
    return Eigen::SelfAdjointEigenSolver<Matrix>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
  };

  const double scale = std::max(1.0, x.frobenius_norm());
  Matrix cur = x.matrix();
  Matrix p = Matrix::Zero(cur.rows(), cur.cols());
  Matrix q = p;
  PptProjection out;
  for (int it = 1; it <= max_iter; ++it) {
    Matrix y = project_floor(cur + p, floor);
    p = cur + p - y;
    Matrix next = ppt_set(y + q);
    q = y + q - next;
    const double step = (next - cur).norm();
    cur = std::move(next);
    out.iterations = it;
    if (step <= tol * scale) {
      out.psd_violation = std::max(0.0, floor - min_eig(cur));
      out.ppt_violation = std::max(0.0, -min_eig(pt(cur)));
      if (out.psd_violation <= tol && out.ppt_violation <= tol) {
        out.converged = true;
        break;
      }
    }
  }
  out.psd_violation = std::max(0.0, floor - min_eig(cur));
  out.ppt_violation = std::max(0.0, -min_eig(pt(cur)));
  out.result = HermitianOp((cur + cur.adjoint()) * 0.5, dims, bi);
  return out;
}

HermitianOp project_ppt_cone(const HermitianOp& x, double tol, int max_iter) {
  PptProjection r = dykstra_ppt(x, 0.0, tol, max_iter);
  const double viol = std::max(r.psd_violation, r.ppt_violation);
  if (!r.converged) {
    std::ostringstream os;
    os << "PPT projection hit the iteration cap (" << max_iter << ") with PSD violation "
       << r.psd_violation << " and PPT violation " << r.ppt_violation;
    throw SolverError(os.str(), viol);
  }
  return r.result;
}

}  // namespace mrd
