#include "mrd/povm.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "mrd/io.hpp"
#include "mrd/states.hpp"

namespace mrd {

namespace {

constexpr double kCompletenessTol = 1e-9;
constexpr double kProjectorTol = 1e-9;

bool is_projective(const Povm& p) {
  for (const auto& m : p.elements())
    if (max_abs(m.matrix() * m.matrix() - m.matrix()) > kProjectorTol) return false;
  return true;
}

bool has_local_record(const Povm& p, bool one_way) {
  if (!p.construction().product_decomposition) return false;
  switch (p.class_tag()) {
    case MeasurementClass::PLO:
    case MeasurementClass::LO: return true;
    case MeasurementClass::PLOCC1:
    case MeasurementClass::LOCC1: return one_way;
    default: return false;
  }
}

std::vector<int> concat_dims(const HermitianOp& a, const HermitianOp& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return dims;
}

std::vector<int> trailing_indices(std::size_t offset, std::size_t count) {
  std::vector<int> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(static_cast<int>(offset + k));
  return out;
}

HermitianOp local_product(const HermitianOp& a, const HermitianOp& b) {
  return HermitianOp(kron(a.matrix(), b.matrix()), concat_dims(a, b),
                     trailing_indices(a.dims().size(), b.dims().size()));
}

}  // namespace

std::string to_string(MeasurementClass c) {
  switch (c) {
    case MeasurementClass::PLO: return "P-LO";
    case MeasurementClass::LO: return "LO";
    case MeasurementClass::PLOCC1: return "P-LOCC1";
    case MeasurementClass::LOCC1: return "LOCC1";
    case MeasurementClass::SEP: return "SEP";
    case MeasurementClass::PPT: return "PPT";
    case MeasurementClass::ALL: return "ALL";
  }
  return "ALL";
}

MeasurementClass measurement_class_from_string(const std::string& s) {
  static const std::map<std::string, MeasurementClass> table = {
      {"P-LO", MeasurementClass::PLO},       {"p-lo", MeasurementClass::PLO},
      {"LO", MeasurementClass::LO},          {"lo", MeasurementClass::LO},
      {"P-LOCC1", MeasurementClass::PLOCC1}, {"p-locc1", MeasurementClass::PLOCC1},
      {"LOCC1", MeasurementClass::LOCC1},    {"locc1", MeasurementClass::LOCC1},
      {"SEP", MeasurementClass::SEP},        {"sep", MeasurementClass::SEP},
      {"PPT", MeasurementClass::PPT},        {"ppt", MeasurementClass::PPT},
      {"ALL", MeasurementClass::ALL},        {"all", MeasurementClass::ALL}};
  const auto it = table.find(s);
  if (it == table.end()) throw DomainError("unknown measurement class '" + s + "'");
  return it->second;
}

bool class_contains(MeasurementClass outer, MeasurementClass inner) {
  using C = MeasurementClass;
  if (outer == inner) return true;
  switch (outer) {
    case C::ALL: return true;
    case C::PPT: return inner != C::ALL;
    case C::SEP: return inner != C::ALL && inner != C::PPT;
    case C::LOCC1: return inner == C::LO || inner == C::PLO || inner == C::PLOCC1;
    case C::PLOCC1: return inner == C::PLO;
    case C::LO: return inner == C::PLO;
    case C::PLO: return false;
  }
  return false;
}

Povm::Povm(std::vector<HermitianOp> elements, std::vector<std::string> labels, MeasurementClass tag,
           Construction construction)
    : elements_(std::move(elements)), labels_(std::move(labels)), tag_(tag),
      construction_(std::move(construction)) {
  if (elements_.empty()) throw ValidationError("POVM needs at least one element");
  if (labels_.empty())
    for (std::size_t z = 0; z < elements_.size(); ++z) labels_.push_back(std::to_string(z));
  if (labels_.size() != elements_.size()) throw StructuralError("POVM label count does not match element count");
  const int n = elements_.front().dim();
  Matrix sum = Matrix::Zero(n, n);
  for (std::size_t z = 0; z < elements_.size(); ++z) {
    const auto& m = elements_[z];
    if (m.dims() != elements_.front().dims()) throw StructuralError("POVM elements act on different spaces");
    const double lo = lambda_min(m);
    if (lo < -Tolerances::psd) {
      std::ostringstream os;
      os << "POVM element " << labels_[z] << " has negative eigenvalue " << lo;
      throw ValidationError(os.str());
    }
    sum += m.matrix();
  }
  const double residual = (sum - Matrix::Identity(n, n)).norm();
  if (max_abs(sum - Matrix::Identity(n, n)) > kCompletenessTol) {
    std::ostringstream os;
    os << "POVM elements do not sum to the identity (residual Frobenius norm " << residual << ")";
    throw ValidationError(os.str());
  }
}

FiniteMeasure born(const DensityOp& rho, const Povm& povm) {
  if (rho.dim() != povm.dim()) throw StructuralError("state and POVM dimensions differ");
  std::vector<double> w;
  w.reserve(povm.size());
  double total = 0.0;
  for (const auto& m : povm.elements()) {
    const double v = std::max(0.0, inner(rho.matrix(), m.matrix()));
    w.push_back(v);
    total += v;
  }
  if (total > 0.0)
    for (double& v : w) v /= total;
  return FiniteMeasure(std::move(w), povm.labels());
}

Povm rank_one_povm(const Matrix& w, MeasurementClass tag) {
  std::vector<HermitianOp> el;
  std::vector<std::string> labels;
  const int d = static_cast<int>(w.rows());
  for (Eigen::Index x = 0; x < w.cols(); ++x) {
    el.emplace_back(w.col(x) * w.col(x).adjoint(), std::vector<int>{d});
    labels.push_back(std::to_string(x));
  }
  return Povm(std::move(el), std::move(labels), tag, {"rank_one", false});
}

Povm local_basis_measurement(int d) {
  if (d < 2) throw DomainError("local dimension must be at least 2");
  std::vector<HermitianOp> el;
  std::vector<std::string> labels;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      RealVector diag = RealVector::Zero(d * d);
      diag(i * d + j) = 1.0;
      el.push_back(HermitianOp::diagonal(diag, {d, d}, {1}));
      labels.push_back(std::to_string(i) + "|" + std::to_string(j));
    }
  return Povm(std::move(el), std::move(labels), MeasurementClass::PLO, {"local_basis", true});
}

Povm product(const Povm& a, const Povm& b) {
  std::vector<HermitianOp> el;
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < b.size(); ++y) {
      el.push_back(local_product(a.elements()[x], b.elements()[y]));
      labels.push_back(a.labels()[x] + "|" + b.labels()[y]);
    }
  return Povm(std::move(el), std::move(labels), MeasurementClass::LO, {"product", true});
}

Povm conditional(const Povm& a, const std::vector<Povm>& b_given_a) {
  if (b_given_a.size() != a.size())
    throw StructuralError("conditional measurement needs one B measurement per A outcome");
  std::vector<HermitianOp> el;
  std::vector<std::string> labels;
  for (std::size_t x = 0; x < a.size(); ++x) {
    const Povm& b = b_given_a[x];
    if (b.dims() != b_given_a.front().dims()) throw StructuralError("conditional B measurements differ in shape");
    for (std::size_t y = 0; y < b.size(); ++y) {
      el.push_back(local_product(a.elements()[x], b.elements()[y]));
      labels.push_back(a.labels()[x] + "|" + b.labels()[y]);
    }
  }
  return Povm(std::move(el), std::move(labels), MeasurementClass::LOCC1, {"conditional", true});
}

Povm binary_from_operator(const HermitianOp& e) {
  const HermitianOp id = HermitianOp::identity(e.dims(), e.b_indices());
  const HermitianOp rest = id - e;
  if (lambda_min(e) < -Tolerances::psd || lambda_min(rest) < -Tolerances::psd)
    throw ValidationError("binary test operator must satisfy 0 <= E <= 1");
  MeasurementClass tag = MeasurementClass::ALL;
  if (e.has_bipartition() && lambda_min(partial_transpose(e)) >= -kCompletenessTol &&
      lambda_min(partial_transpose(rest)) >= -kCompletenessTol)
    tag = MeasurementClass::PPT;
  return Povm({e, rest}, {"0", "1"}, tag, {"binary", false});
}

Povm isotropic_measurement(int d) {
  const HermitianOp phi = (1.0 / d) * max_entangled_projector(d);
  const HermitianOp id = HermitianOp::identity({d, d}, {1});
  return binary_from_operator(phi + (1.0 / (d + 1.0)) * (id - phi));
}

Povm povm_tensor_power(const Povm& p, int n) {
  if (n < 1) throw DomainError("tensor power needs n >= 1");
  if (n == 1) return p;
  std::vector<HermitianOp> el = p.elements();
  std::vector<std::string> labels = p.labels();
  for (int k = 1; k < n; ++k) {
    std::vector<HermitianOp> next_el;
    std::vector<std::string> next_labels;
    for (std::size_t i = 0; i < el.size(); ++i)
      for (std::size_t j = 0; j < p.size(); ++j) {
        next_el.push_back(tensor(el[i], p.elements()[j]));
        next_labels.push_back(labels[i] + "," + p.labels()[j]);
      }
    el = std::move(next_el);
    labels = std::move(next_labels);
  }
  // Reorder each element into the block bipartition.
  const auto& base = p.elements().front();
  if (base.has_bipartition()) {
    const int per = static_cast<int>(base.dims().size());
    std::vector<char> is_b(static_cast<std::size_t>(per), 0);
    for (int b : base.b_indices()) is_b[static_cast<std::size_t>(b)] = 1;
    std::vector<int> order;
    for (int side = 0; side < 2; ++side)
      for (int c = 0; c < n; ++c)
        for (int s = 0; s < per; ++s)
          if (is_b[static_cast<std::size_t>(s)] == side) order.push_back(c * per + s);
    for (auto& m : el) m = permute_subsystems(m, order);
  }
  Construction rec{"tensor_power", p.construction().product_decomposition};
  return Povm(std::move(el), std::move(labels), p.class_tag(), rec);
}

Povm coarse_grain(const Povm& p, const std::vector<int>& groups) {
  if (groups.size() != p.size()) throw StructuralError("coarse-graining map must cover every outcome");
  int count = 0;
  for (int g : groups) {
    if (g < 0) throw StructuralError("coarse-graining group index must be nonnegative");
    count = std::max(count, g + 1);
  }
  std::vector<HermitianOp> el(static_cast<std::size_t>(count),
                              HermitianOp::zero(p.dims(), p.elements().front().b_indices()));
  std::vector<std::string> labels(static_cast<std::size_t>(count));
  for (std::size_t z = 0; z < p.size(); ++z) {
    const auto g = static_cast<std::size_t>(groups[z]);
    el[g] += p.elements()[z];
    labels[g] += (labels[g].empty() ? "" : "+") + p.labels()[z];
  }
  for (std::size_t g = 0; g < labels.size(); ++g)
    if (labels[g].empty()) labels[g] = "empty" + std::to_string(g);
  // Merging outcomes keeps SEP and PPT membership; local structure is not tracked further.
  MeasurementClass tag = p.class_tag();
  if (tag == MeasurementClass::PLO || tag == MeasurementClass::LO || tag == MeasurementClass::PLOCC1 ||
      tag == MeasurementClass::LOCC1)
    tag = MeasurementClass::SEP;
  return Povm(std::move(el), std::move(labels), tag, {"coarse_grained", p.construction().product_decomposition});
}

ClassCheck class_check(const Povm& p, MeasurementClass c) {
  using C = MeasurementClass;
  switch (c) {
    case C::ALL: return {true, ""};
    case C::PPT: {
      if (!p.elements().front().has_bipartition()) return {false, "no bipartition declared"};
      for (std::size_t z = 0; z < p.size(); ++z) {
        const double lo = lambda_min(partial_transpose(p.elements()[z]));
        if (lo < -kCompletenessTol) {
          std::ostringstream os;
          os << "element " << p.labels()[z] << " has partial-transpose eigenvalue " << lo;
          return {false, os.str()};
        }
      }
      return {true, ""};
    }
    case C::SEP:
      if (p.construction().product_decomposition && class_contains(C::SEP, p.class_tag())) return {true, ""};
      return {false, "undecidable"};
    case C::LOCC1:
      if (has_local_record(p, true)) return {true, ""};
      return {false, "construction record is not one-way local"};
    case C::LO:
      if (has_local_record(p, false)) return {true, ""};
      return {false, "construction record is not a product measurement"};
    case C::PLOCC1:
    case C::PLO: {
      if (!has_local_record(p, c == C::PLOCC1))
        return {false, "construction record does not match " + to_string(c)};
      if (!is_projective(p)) return {false, "elements are not projectors"};
      return {true, ""};
    }
  }
  return {false, "unknown class"};
}

nlohmann::json povm_to_json(const Povm& p) {
  nlohmann::json el = nlohmann::json::array();
  for (const auto& m : p.elements()) el.push_back(operator_to_json(m));
  return {{"class", to_string(p.class_tag())}, {"elements", el}, {"labels", p.labels()}};
}

Povm povm_from_json(const nlohmann::json& j) {
  try {
    std::vector<HermitianOp> el;
    for (const auto& m : j.at("elements")) el.push_back(operator_from_json(m));
    std::vector<std::string> labels;
    if (j.contains("labels"))
      for (const auto& l : j.at("labels")) labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
    const auto tag = j.contains("class") ? measurement_class_from_string(j.at("class").get<std::string>())
                                         : MeasurementClass::ALL;
    return Povm(std::move(el), std::move(labels), tag, {"raw", false});
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("malformed POVM JSON: ") + e.what());
  }
}

}  // namespace mrd
