#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mrd/errors.hpp"
#include "mrd/table.hpp"

using namespace mrd;

namespace {

Row sample() {
  Row r;
  r.family = "iso:0.5/iso:0.25";
  r.d = 3;
  r.n = 2;
  r.p = 0.5;
  r.q = 0.25;
  r.alpha = 1.5;
  r.cls = "PPT";
  r.kind = "upper";
  r.value = ExtReal::finite(0.1234567890123456789);
  r.status = "converged, \"quoted\"";
  return r;
}

}  // namespace

TEST_CASE("csv rows round-trip exactly") {
  const Row r = sample();
  const Row back = row_from_csv(to_csv(r, LogBase::Two));
  CHECK(back.family == r.family);
  CHECK(back.d == 3);
  CHECK(back.n == 2);
  CHECK(*back.p == *r.p);
  CHECK(*back.q == *r.q);
  CHECK(back.alpha == r.alpha);
  CHECK(back.value.value == r.value.value);
  CHECK(back.status == r.status);

  Row inf = r;
  inf.p.reset();
  inf.q.reset();
  inf.alpha = kAlphaInfinity;
  inf.value = ExtReal::inf();
  const Row b2 = row_from_csv(to_csv(inf, LogBase::E));
  CHECK_FALSE(b2.p.has_value());
  CHECK(std::isinf(b2.alpha));
  CHECK(b2.value.infinite);
}

TEST_CASE("json rows round-trip exactly") {
  Row r = sample();
  r.value = ExtReal::inf();
  const nlohmann::json j = to_json(r, LogBase::Ten);
  CHECK(j["value_nats"] == "inf");
  const Row back = row_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.value.infinite);
  CHECK(back.kind == r.kind);
  CHECK(*back.q == 0.25);
}

TEST_CASE("display column is nats divided by the log of the base") {
  CHECK(to_display(std::log(2.0), LogBase::Two) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(to_display(std::log(10.0), LogBase::Ten) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(to_display(0.7, LogBase::E) == 0.7);
  CHECK(std::isinf(to_display(INFINITY, LogBase::Two)));
  CHECK_THROWS_AS(log_base_from_string("3"), DomainError);

  std::ostringstream out;
  write_rows(out, {sample()}, LogBase::Two, false);
  std::istringstream in(out.str());
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  CHECK(header == kCsvHeader);
  CHECK(row_from_csv(line).value.value == sample().value.value);
}

TEST_CASE("malformed csv lines are rejected") {
  CHECK_THROWS_AS(row_from_csv("a,b,c"), ValidationError);
  CHECK_THROWS_AS(row_from_csv("f,x,1,,,2,PPT,upper,0.1,0.1,ok"), ValidationError);
}

TEST_CASE("rows sort by their key columns") {
  Row a = sample(), b = sample();
  b.alpha = 2.0;
  CHECK(a < b);
  CHECK_FALSE(b < a);
}
