#pragma once

// Classical Renyi divergences of finite measures, in nats.

#include <limits>
#include <string>
#include <vector>

namespace mrd {

/// A real number or +infinity.
struct ExtReal {
  double value = 0.0;
  bool infinite = false;

  static ExtReal finite(double v) { return {v, false}; }
  static ExtReal inf() { return {std::numeric_limits<double>::infinity(), true}; }

  bool is_finite() const { return !infinite; }
  /// The value as a double, +inf when infinite.
  double as_double() const { return infinite ? std::numeric_limits<double>::infinity() : value; }
};

/// Nonnegative weights over an ordered list of labels.
class FiniteMeasure {
 public:
  FiniteMeasure() = default;
  explicit FiniteMeasure(std::vector<double> weights, std::vector<std::string> labels = {});

  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }

  double total() const;
  bool normalized() const;

  /// Product measure with labels "x|y".
  FiniteMeasure product(const FiniteMeasure& other) const;

 private:
  std::vector<double> weights_;
  std::vector<std::string> labels_;
};

/// Orders that select the dedicated branches.
inline constexpr double kAlphaInfinity = std::numeric_limits<double>::infinity();

/// Q_alpha = sum mu^alpha nu^(1-alpha) for alpha in (0,1) or (1,inf).
ExtReal q_alpha(const FiniteMeasure& mu, const FiniteMeasure& nu, double alpha);

/// Renyi divergence of order alpha in (0,inf]; alpha == 1 is Kullback-Leibler,
/// alpha == kAlphaInfinity the max-divergence.
ExtReal renyi(const FiniteMeasure& mu, const FiniteMeasure& nu, double alpha);

}  // namespace mrd
