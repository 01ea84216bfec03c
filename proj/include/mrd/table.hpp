#pragma once

// Result rows for the command-line tables. Values are kept in nats; the
// display column is the same value in the chosen log base.

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mrd/classical.hpp"

namespace mrd {

enum class LogBase { Two, E, Ten };

LogBase log_base_from_string(const std::string& s);  // "2", "e", "10"
std::string to_string(LogBase b);
/// nats / ln(base); +inf stays +inf.
double to_display(double nats, LogBase base);

struct Row {
  std::string family;  // e.g. "phi/phi-perp"
  int d = 0;
  int n = 1;
  std::optional<double> p;
  std::optional<double> q;
  double alpha = 0.0;  // kAlphaInfinity prints as "inf"
  std::string cls;     // measurement class
  std::string kind;    // lower, upper, exact, heuristic, gap, ...
  ExtReal value;
  std::string status;

  bool operator<(const Row& o) const;
};

inline const char* kCsvHeader = "family,d,n,p,q,alpha,class,kind,value_nats,value_display,status";

std::string to_csv(const Row& r, LogBase base);
/// Inverse of to_csv; the display column is not read back.
Row row_from_csv(const std::string& line);

nlohmann::json to_json(const Row& r, LogBase base);
Row row_from_json(const nlohmann::json& j);

void write_rows(std::ostream& out, const std::vector<Row>& rows, LogBase base, bool json);

}  // namespace mrd
