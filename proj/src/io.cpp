#include "mrd/io.hpp"

#include <cmath>
#include <limits>

namespace mrd {

nlohmann::json operator_to_json(const HermitianOp& x) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (int r = 0; r < x.dim(); ++r) {
    nlohmann::json rr = nlohmann::json::array(), ri = nlohmann::json::array();
    for (int c = 0; c < x.dim(); ++c) {
      rr.push_back(x.matrix()(r, c).real());
      ri.push_back(x.matrix()(r, c).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"dims", x.dims()}, {"b_indices", x.b_indices()}, {"re", re}, {"im", im}};
}

HermitianOp operator_from_json(const nlohmann::json& j) {
  try {
    const auto dims = j.at("dims").get<std::vector<int>>();
    const auto b = j.contains("b_indices") ? j.at("b_indices").get<std::vector<int>>() : std::vector<int>{};
    const auto& re = j.at("re");
    const std::size_t n = re.size();
    const bool has_im = j.contains("im");
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
      if (re[r].size() != n) throw StructuralError("matrix JSON rows must be square");
      for (std::size_t c = 0; c < n; ++c) {
        const double im = has_im ? j.at("im")[r][c].get<double>() : 0.0;
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = Complex(re[r][c].get<double>(), im);
      }
    }
    return HermitianOp(std::move(m), dims, b);
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("malformed matrix JSON: ") + e.what());
  }
}

nlohmann::json number_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw StructuralError("unexpected number string '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace mrd
