#include "mrd/table.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <tuple>

#include "mrd/errors.hpp"

namespace mrd {

namespace {

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_num(const std::string& s, const char* column) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ValidationError(std::string("bad number in column ") + column + ": '" + s + "'");
  return v;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

nlohmann::json json_num(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double json_to_num(const nlohmann::json& j) {
  if (j.is_string()) return parse_num(j.get<std::string>(), "json");
  return j.get<double>();
}

}  // namespace

LogBase log_base_from_string(const std::string& s) {
  if (s == "2") return LogBase::Two;
  if (s == "e") return LogBase::E;
  if (s == "10") return LogBase::Ten;
  throw DomainError("log base must be 2, e or 10, got '" + s + "'");
}

std::string to_string(LogBase b) {
  switch (b) {
    case LogBase::Two: return "2";
    case LogBase::E: return "e";
    case LogBase::Ten: return "10";
  }
  return "?";
}

double to_display(double nats, LogBase base) {
  switch (base) {
    case LogBase::Two: return nats / std::log(2.0);
    case LogBase::E: return nats;
    case LogBase::Ten: return nats / std::log(10.0);
  }
  return nats;
}

bool Row::operator<(const Row& o) const {
  const auto key = [](const Row& r) {
    return std::make_tuple(r.family, r.d, r.n, r.p.value_or(-1.0), r.q.value_or(-1.0), r.alpha, r.cls, r.kind);
  };
  return key(*this) < key(o);
}

std::string to_csv(const Row& r, LogBase base) {
  const double nats = r.value.as_double();
  std::string s = quote(r.family) + "," + std::to_string(r.d) + "," + std::to_string(r.n) + ",";
  s += (r.p ? num(*r.p) : "") + "," + (r.q ? num(*r.q) : "") + ",";
  s += num(r.alpha) + "," + quote(r.cls) + "," + quote(r.kind) + ",";
  s += num(nats) + "," + num(to_display(nats, base)) + "," + quote(r.status);
  return s;
}

Row row_from_csv(const std::string& line) {
  const auto f = split_csv(line);
  if (f.size() != 11) throw ValidationError("expected 11 columns, got " + std::to_string(f.size()));
  Row r;
  r.family = f[0];
  r.d = static_cast<int>(parse_num(f[1], "d"));
  r.n = static_cast<int>(parse_num(f[2], "n"));
  if (!f[3].empty()) r.p = parse_num(f[3], "p");
  if (!f[4].empty()) r.q = parse_num(f[4], "q");
  r.alpha = parse_num(f[5], "alpha");
  r.cls = f[6];
  r.kind = f[7];
  const double nats = parse_num(f[8], "value_nats");
  r.value = std::isinf(nats) ? ExtReal::inf() : ExtReal::finite(nats);
  r.status = f[10];
  return r;
}

nlohmann::json to_json(const Row& r, LogBase base) {
  const double nats = r.value.as_double();
  nlohmann::json j = {{"family", r.family}, {"d", r.d}, {"n", r.n}, {"alpha", json_num(r.alpha)},
                      {"class", r.cls},     {"kind", r.kind}, {"value_nats", json_num(nats)},
                      {"value_display", json_num(to_display(nats, base))}, {"status", r.status}};
  j["p"] = r.p ? nlohmann::json(*r.p) : nlohmann::json(nullptr);
  j["q"] = r.q ? nlohmann::json(*r.q) : nlohmann::json(nullptr);
  return j;
}

Row row_from_json(const nlohmann::json& j) {
  Row r;
  r.family = j.at("family").get<std::string>();
  r.d = j.at("d").get<int>();
  r.n = j.at("n").get<int>();
  if (!j.at("p").is_null()) r.p = j.at("p").get<double>();
  if (!j.at("q").is_null()) r.q = j.at("q").get<double>();
  r.alpha = json_to_num(j.at("alpha"));
  r.cls = j.at("class").get<std::string>();
  r.kind = j.at("kind").get<std::string>();
  const double nats = json_to_num(j.at("value_nats"));
  r.value = std::isinf(nats) ? ExtReal::inf() : ExtReal::finite(nats);
  r.status = j.at("status").get<std::string>();
  return r;
}

void write_rows(std::ostream& out, const std::vector<Row>& rows, LogBase base, bool json) {
  if (json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Row& r : rows) arr.push_back(to_json(r, base));
    out << arr.dump(2) << "\n";
    return;
  }
  out << kCsvHeader << "\n";
  for (const Row& r : rows) out << to_csv(r, base) << "\n";
}

}  // namespace mrd
