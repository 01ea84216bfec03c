#pragma once

// Measurements: validated POVMs tagged with the locality class their
// construction guarantees.

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "mrd/classical.hpp"
#include "mrd/linops.hpp"

namespace mrd {

/// Ordered so that LO < LOCC1 < SEP < PPT < ALL; the projective variants sit
/// below their general counterparts.
enum class MeasurementClass { PLO, LO, PLOCC1, LOCC1, SEP, PPT, ALL };

std::string to_string(MeasurementClass c);
MeasurementClass measurement_class_from_string(const std::string& s);

/// True when every measurement of class `inner` also belongs to `outer`.
bool class_contains(MeasurementClass outer, MeasurementClass inner);

/// How a POVM was put together. Only "local_basis", "product", "conditional"
/// and tensor powers of those carry a product decomposition.
struct Construction {
  std::string kind = "raw";
  bool product_decomposition = false;
};

class Povm {
 public:
  Povm() = default;
  /// Validates PSD elements (psd_tol) and completeness (1e-9); throws
  /// ValidationError with the residual norm otherwise.
  Povm(std::vector<HermitianOp> elements, std::vector<std::string> labels, MeasurementClass tag,
       Construction construction = {});

  const std::vector<HermitianOp>& elements() const { return elements_; }
  const std::vector<std::string>& labels() const { return labels_; }
  MeasurementClass class_tag() const { return tag_; }
  const Construction& construction() const { return construction_; }
  std::size_t size() const { return elements_.size(); }
  int dim() const { return elements_.empty() ? 0 : elements_.front().dim(); }
  const std::vector<int>& dims() const { return elements_.front().dims(); }

 private:
  std::vector<HermitianOp> elements_;
  std::vector<std::string> labels_;
  MeasurementClass tag_ = MeasurementClass::ALL;
  Construction construction_;
};

/// Outcome statistics tr[rho M^z]; negative round-off is clipped and the
/// result renormalized.
FiniteMeasure born(const DensityOp& rho, const Povm& povm);

/// Single-party POVM from the columns of a matrix with orthonormal rows:
/// elements w_x w_x^dag.
Povm rank_one_povm(const Matrix& rows_orthonormal, MeasurementClass tag = MeasurementClass::ALL);

/// Computational-basis projectors |i><i| (x) |j><j| on d x d.
Povm local_basis_measurement(int d);

/// M_A^x (x) M_B^y with the B party appended as the last subsystems.
Povm product(const Povm& a, const Povm& b);

/// M_A^x (x) M_B^{y|x}; one B measurement per A outcome.
Povm conditional(const Povm& a, const std::vector<Povm>& b_given_a);

/// Two-outcome test {E, 1 - E}. Tagged PPT when both elements have PSD
/// partial transpose, ALL otherwise.
Povm binary_from_operator(const HermitianOp& e);

/// {Phi + (1 - Phi)/(d+1), d/(d+1) (1 - Phi)} with Phi the normalized
/// maximally entangled projector.
Povm isotropic_measurement(int d);

/// n-fold tensor power with the block bipartition A1..An : B1..Bn.
Povm povm_tensor_power(const Povm& p, int n);

/// Merges outcomes: outcome z of `p` goes to group `groups[z]`.
Povm coarse_grain(const Povm& p, const std::vector<int>& groups);

struct ClassCheck {
  bool pass = false;
  std::string reason;
};

ClassCheck class_check(const Povm& p, MeasurementClass c);

nlohmann::json povm_to_json(const Povm& p);
/// Loaded POVMs carry no construction record, so SEP and the local classes
/// cannot be confirmed for them.
Povm povm_from_json(const nlohmann::json& j);

}  // namespace mrd
