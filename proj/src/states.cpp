#include "mrd/states.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "mrd/io.hpp"

namespace mrd {

namespace {

void require_dim(int d) {
  if (d < 2) throw DomainError("local dimension must be at least 2");
}

void require_unit(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << what << " parameter must lie in [0,1], got " << p;
    throw DomainError(os.str());
  }
}

HermitianOp bipartite(Matrix m, int d) { return HermitianOp(std::move(m), {d, d}, {1}); }

int local_dim(const HermitianOp& x) {
  if (x.dims().size() != 2 || x.dims()[0] != x.dims()[1])
    throw StructuralError("twirl requires an operator on d x d");
  return x.dims()[0];
}

}  // namespace

HermitianOp swap_operator(int d) {
  require_dim(d);
  Matrix f = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f(i * d + j, j * d + i) = 1.0;
  return bipartite(std::move(f), d);
}

HermitianOp max_entangled_projector(int d) {
  require_dim(d);
  Matrix m = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i * d + i, j * d + j) = 1.0;
  return bipartite(std::move(m), d);
}

HermitianOp symmetric_projector(int d) {
  return 0.5 * (HermitianOp::identity({d, d}, {1}) + swap_operator(d));
}

HermitianOp antisymmetric_projector(int d) {
  return 0.5 * (HermitianOp::identity({d, d}, {1}) - swap_operator(d));
}

DensityOp max_entangled(int d) { return DensityOp((1.0 / d) * max_entangled_projector(d)); }

DensityOp phi_perp(int d) {
  const HermitianOp rest = HermitianOp::identity({d, d}, {1}) - (1.0 / d) * max_entangled_projector(d);
  return DensityOp((1.0 / (d * d - 1.0)) * rest);
}

DensityOp symmetric_state(int d) { return DensityOp((2.0 / (d * (d + 1.0))) * symmetric_projector(d)); }

DensityOp antisymmetric_state(int d) {
  return DensityOp((2.0 / (d * (d - 1.0))) * antisymmetric_projector(d));
}

DensityOp isotropic(const IsotropicCoords& c) {
  require_dim(c.d);
  require_unit(c.p, "isotropic");
  return DensityOp(c.p * max_entangled(c.d).op() + (1.0 - c.p) * phi_perp(c.d).op());
}

DensityOp werner(const WernerCoords& c) {
  require_dim(c.d);
  require_unit(c.p, "Werner");
  return DensityOp(c.p * symmetric_state(c.d).op() + (1.0 - c.p) * antisymmetric_state(c.d).op());
}

DensityOp make_state(Family family, int d, double param) {
  require_dim(d);
  switch (family) {
    case Family::MaxEntangled: return max_entangled(d);
    case Family::PhiPerp: return phi_perp(d);
    case Family::Symmetric: return symmetric_state(d);
    case Family::Antisymmetric: return antisymmetric_state(d);
    case Family::Isotropic: return isotropic({d, param});
    case Family::Werner: return werner({d, param});
    case Family::Raw: break;
  }
  throw DomainError("raw states must be built from a matrix");
}

DensityOp make_state(const std::string& spec, int d) {
  auto param = [&](std::size_t prefix) {
    const std::string text = spec.substr(prefix);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != text.size() || text.empty())
      throw DomainError("cannot parse state parameter in '" + spec + "'");
    return v;
  };
  if (spec == "phi") return max_entangled(d);
  if (spec == "phi-perp") return phi_perp(d);
  if (spec == "sym") return symmetric_state(d);
  if (spec == "antisym") return antisymmetric_state(d);
  if (spec.rfind("iso:", 0) == 0) return isotropic({d, param(4)});
  if (spec.rfind("werner:", 0) == 0) return werner({d, param(7)});
  if (spec.rfind("raw:", 0) == 0) {
    std::ifstream in(spec.substr(4));
    if (!in) throw StructuralError("cannot open state file '" + spec.substr(4) + "'");
    nlohmann::json j;
    in >> j;
    return DensityOp(operator_from_json(j));
  }
  throw DomainError("unknown state family '" + spec + "'");
}

DensityOp full_support_mix(const DensityOp& rho, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("mixing weight must lie in (0,1]");
  const HermitianOp& x = rho.op();
  const HermitianOp id = HermitianOp::identity(x.dims(), x.b_indices());
  return DensityOp((1.0 - eps) * x + (eps / x.dim()) * id);
}

HermitianOp tensor_power(const HermitianOp& x, int n) {
  if (n < 1) throw DomainError("tensor power needs n >= 1");
  long long total = 1;
  for (int k = 0; k < n; ++k) {
    total *= x.dim();
    if (total > kMaxTotalDimension)
      throw ResourceError("tensor power exceeds dimension cap of " + std::to_string(kMaxTotalDimension));
  }
  if (n == 1) return x;
  HermitianOp acc = x;
  for (int k = 1; k < n; ++k) acc = tensor(acc, x);
  if (!x.has_bipartition()) return acc;

  // Gather every copy's A subsystems first, then every copy's B subsystems.
  const int per = static_cast<int>(x.dims().size());
  std::vector<char> is_b(static_cast<std::size_t>(per), 0);
  for (int b : x.b_indices()) is_b[static_cast<std::size_t>(b)] = 1;
  std::vector<int> order;
  for (int c = 0; c < n; ++c)
    for (int s = 0; s < per; ++s)
      if (!is_b[static_cast<std::size_t>(s)]) order.push_back(c * per + s);
  for (int c = 0; c < n; ++c)
    for (int s = 0; s < per; ++s)
      if (is_b[static_cast<std::size_t>(s)]) order.push_back(c * per + s);
  return permute_subsystems(acc, order);
}

DensityOp tensor_power(const DensityOp& rho, int n) { return DensityOp(tensor_power(rho.op(), n)); }

HermitianOp twirl(const HermitianOp& x, TwirlKind kind) {
  const int d = local_dim(x);
  const HermitianOp id = HermitianOp::identity({d, d}, {1});
  const HermitianOp xb = x.with_bipartition({1});
  if (kind == TwirlKind::Isotropic) {
    const HermitianOp phi = (1.0 / d) * max_entangled_projector(d);
    const double c1 = inner(phi, xb);
    const double c2 = (xb.trace() - c1) / (d * d - 1.0);
    return c1 * phi + c2 * (id - phi);
  }
  const HermitianOp sym = symmetric_projector(d);
  const HermitianOp anti = antisymmetric_projector(d);
  const double c_sym = inner(sym, xb) / (d * (d + 1.0) / 2.0);
  const double c_anti = inner(anti, xb) / (d * (d - 1.0) / 2.0);
  return c_sym * sym + c_anti * anti;
}

}  // namespace mrd
