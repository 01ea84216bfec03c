#include "mrd/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mrd/errors.hpp"
#include "mrd/linops.hpp"

namespace mrd {

namespace {

bool is_zero(double w) { return w < Tolerances::zero_floor; }

void require_alphabet(const FiniteMeasure& mu, const FiniteMeasure& nu) {
  if (mu.size() != nu.size()) throw StructuralError("measures are defined on different alphabets");
  if (!mu.labels().empty() && !nu.labels().empty() && mu.labels() != nu.labels())
    throw StructuralError("measures carry different labels");
}

void require_order(double alpha) {
  if (!(alpha > 0.0) || std::isnan(alpha)) {
    std::ostringstream os;
    os << "Renyi order must be positive, got " << alpha;
    throw DomainError(os.str());
  }
}

}  // namespace

FiniteMeasure::FiniteMeasure(std::vector<double> weights, std::vector<std::string> labels)
    : weights_(std::move(weights)), labels_(std::move(labels)) {
  if (!labels_.empty() && labels_.size() != weights_.size())
    throw StructuralError("label count does not match weight count");
  for (double w : weights_)
    if (!(w >= 0.0)) throw DomainError("measure weights must be nonnegative");
}

double FiniteMeasure::total() const { return std::accumulate(weights_.begin(), weights_.end(), 0.0); }

bool FiniteMeasure::normalized() const { return std::abs(total() - 1.0) <= 1e-10; }

FiniteMeasure FiniteMeasure::product(const FiniteMeasure& other) const {
  std::vector<double> w;
  std::vector<std::string> l;
  w.reserve(size() * other.size());
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < other.size(); ++j) {
      w.push_back(weights_[i] * other.weights_[j]);
      const std::string a = labels_.empty() ? std::to_string(i) : labels_[i];
      const std::string b = other.labels_.empty() ? std::to_string(j) : other.labels_[j];
      l.push_back(a + "|" + b);
    }
  return FiniteMeasure(std::move(w), std::move(l));
}

ExtReal q_alpha(const FiniteMeasure& mu, const FiniteMeasure& nu, double alpha) {
  require_alphabet(mu, nu);
  require_order(alpha);
  if (alpha == 1.0 || std::isinf(alpha)) throw DomainError("q_alpha requires alpha in (0,1) or (1,inf)");
  double sum = 0.0;
  for (std::size_t z = 0; z < mu.size(); ++z) {
    const double m = mu[z], n = nu[z];
    if (is_zero(m)) continue;
    if (is_zero(n)) {
      if (alpha > 1.0) return ExtReal::inf();
      continue;
    }
    sum += std::pow(m, alpha) * std::pow(n, 1.0 - alpha);
  }
  return ExtReal::finite(sum);
}

ExtReal renyi(const FiniteMeasure& mu, const FiniteMeasure& nu, double alpha) {
  require_alphabet(mu, nu);
  require_order(alpha);
  if (!mu.normalized() || !nu.normalized()) {
    std::ostringstream os;
    os << "Renyi divergence requires normalized measures (totals " << mu.total() << ", " << nu.total() << ")";
    throw DomainError(os.str());
  }

  if (std::isinf(alpha)) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t z = 0; z < mu.size(); ++z) {
      if (is_zero(mu[z])) continue;
      if (is_zero(nu[z])) return ExtReal::inf();
      best = std::max(best, std::log(mu[z] / nu[z]));
    }
    return ExtReal::finite(best);
  }

  if (alpha == 1.0) {
    double kl = 0.0;
    for (std::size_t z = 0; z < mu.size(); ++z) {
      if (is_zero(mu[z])) continue;
      if (is_zero(nu[z])) return ExtReal::inf();
      kl += mu[z] * std::log(mu[z] / nu[z]);
    }
    return ExtReal::finite(kl);
  }

  const ExtReal q = q_alpha(mu, nu, alpha);
  if (q.infinite) return ExtReal::inf();
  if (q.value <= 0.0) return ExtReal::inf();  // alpha < 1 and mu orthogonal to nu
  return ExtReal::finite(std::log(q.value) / (alpha - 1.0));
}

}  // namespace mrd
