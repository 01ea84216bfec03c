// mrd: command-line front end for measured Renyi divergences.
//
// Exit codes: 0 success (solver trouble is reported in the status column),
// 1 a reproduce criterion failed, 2 usage error, 3 structural or domain error.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mrd/acceptance.hpp"
#include "mrd/closedform.hpp"
#include "mrd/errors.hpp"
#include "mrd/exponents.hpp"
#include "mrd/maxdiv.hpp"
#include "mrd/measured.hpp"
#include "mrd/states.hpp"
#include "mrd/table.hpp"
#include "mrd/varprog.hpp"

using namespace mrd;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string log_base = "2";
  std::string format = "csv";
  std::uint64_t seed = 1;
  double delta = 1e-8;
  int restarts = 8;
};

double parse_real(const std::string& text, const std::string& what) {
  if (text == "inf") return kAlphaInfinity;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw UsageError(what + ": cannot parse '" + text + "' at position " + std::to_string(used + 1));
  return v;
}

// "0.1,0.5,inf" or "start:stop:count".
std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  if (std::count(text.begin(), text.end(), ':') == 2) {
    const auto a = text.find(':'), b = text.find(':', a + 1);
    const double lo = parse_real(text.substr(0, a), what), hi = parse_real(text.substr(a + 1, b - a - 1), what);
    const double k = parse_real(text.substr(b + 1), what);
    if (k < 1 || k != std::floor(k)) throw UsageError(what + ": range count must be a positive integer");
    for (int i = 0; i < int(k); ++i) out.push_back(k == 1 ? lo : lo + (hi - lo) * i / (k - 1));
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(item, what));
  if (out.empty()) throw UsageError(what + ": empty list");
  return out;
}

// Parameter of the isotropic or Werner family a spec belongs to.
struct FamilyParam {
  char family = '?';  // 'i' isotropic, 'w' Werner
  double value = 0.0;
};

std::optional<FamilyParam> family_param(const std::string& spec) {
  if (spec == "phi") return FamilyParam{'i', 1.0};
  if (spec == "phi-perp") return FamilyParam{'i', 0.0};
  if (spec == "sym") return FamilyParam{'w', 1.0};
  if (spec == "antisym") return FamilyParam{'w', 0.0};
  if (spec.rfind("iso:", 0) == 0) return FamilyParam{'i', std::stod(spec.substr(4))};
  if (spec.rfind("werner:", 0) == 0) return FamilyParam{'w', std::stod(spec.substr(7))};
  return std::nullopt;
}

DensityOp load_state(const std::string& spec, int d, int n, const std::string& flag) {
  DensityOp s;
  try {
    s = make_state(spec, d);
  } catch (const DomainError& e) {
    const auto colon = spec.find(':');
    throw UsageError(flag + " '" + spec + "': " + e.what() +
                     (colon == std::string::npos ? "" : " (position " + std::to_string(colon + 2) + ")"));
  }
  return n > 1 ? tensor_power(s, n) : s;
}

Row base_row(const std::string& rho, const std::string& sigma, int d, int n, double alpha) {
  Row r;
  r.family = rho + "/" + sigma;
  r.d = d;
  r.n = n;
  r.alpha = alpha;
  const auto fr = family_param(rho), fs = family_param(sigma);
  if (fr && fs && fr->family == fs->family) {
    r.p = fr->value;
    r.q = fs->value;
  }
  return r;
}

ConeSpec cone_for(MeasurementClass cls, double delta) {
  ConeSpec c;
  c.delta = delta;
  c.kind = cls == MeasurementClass::ALL ? ConeKind::PSD
           : cls == MeasurementClass::SEP ? ConeKind::SEPInner
                                          : ConeKind::PPT;
  return c;
}

Row lower_row(Row r, const DensityOp& rho, const DensityOp& sigma, MeasurementClass cls, const Globals& g) {
  SearchConfig sc;
  sc.seed = g.seed;
  sc.restarts = g.restarts;
  const MeasurementClass search = cls == MeasurementClass::LOCC1 ? MeasurementClass::LOCC1 : MeasurementClass::LO;
  try {
    const BoundResult b = optimize_measured(rho, sigma, r.alpha, search, sc);
    r.cls = to_string(search);
    r.kind = to_string(b.kind);
    r.value = b.value;
    r.status = to_string(b.status);
  } catch (const SolverError& e) {
    r.cls = to_string(search);
    r.kind = "lower";
    r.value = ExtReal::finite(std::nan(""));
    r.status = std::string("error: ") + e.what();
  }
  return r;
}

Row upper_row(Row r, const DensityOp& rho, const DensityOp& sigma, MeasurementClass cls, const Globals& g) {
  const ConeSpec cone = cone_for(cls, g.delta);
  r.cls = cone.kind == ConeKind::PSD ? "ALL" : cone.kind == ConeKind::SEPInner ? "SEP" : "PPT";
  if (cone.kind == ConeKind::PSD) {
    // The floored solver stays finite, so settle support violations here.
    const bool blowup = r.alpha >= 1.0 ? quantum_max_divergence(rho, sigma).infinite
                                       : (rho.matrix() * sigma.matrix()).trace().real() <= 1e-14;
    if (blowup) {
      r.kind = "exact";
      r.value = ExtReal::inf();
      r.status = "support condition";
      return r;
    }
  }
  try {
    SolverConfig cfg;
    cfg.seed = g.seed;
    const VarResult v = variational_bound(rho, sigma, r.alpha, cone, cfg);
    r.kind = to_string(v.kind);
    r.value = v.value;
    r.status = to_string(v.status);
    if (cone.kind == ConeKind::SEPInner) r.status += "; inner approximation of SEP";
  } catch (const SolverError& e) {
    r.kind = "upper";
    r.value = ExtReal::finite(std::nan(""));
    r.status = std::string("error: ") + e.what();
  }
  return r;
}

Row closedform_row(Row r, const std::string& rho, const std::string& sigma, int d, int n,
                   MeasurementClass cls) {
  if (n != 1) throw DomainError("closed forms are single-copy values; use --n 1");
  const auto fr = family_param(rho), fs = family_param(sigma);
  r.cls = to_string(cls);
  r.kind = "exact";
  r.status = "closed form";
  if (fr && fs && fr->family == 'i' && fs->family == 'i') {
    r.value = iso_measured(d, fr->value, fs->value, r.alpha);
    return r;
  }
  if (fr && fs && fr->family == 'w' && fs->family == 'w' && fr->value == 0.0) {
    r.value = sigma == "sym" ? werner_measured(d, 1.0, WernerTarget::AntiVsSym, r.alpha)
                             : werner_measured(d, fs->value, WernerTarget::AntiVsWerner, r.alpha);
    return r;
  }
  throw DomainError("no closed form for " + rho + " against " + sigma +
                    "; available: isotropic pairs, antisym against sym or werner:q");
}

void emit(const std::vector<Row>& rows, const Globals& g) {
  write_rows(std::cout, rows, log_base_from_string(g.log_base), g.format == "json");
}

std::string short_num(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MRD_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measured Renyi divergences under locality constraints"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--log-base", g.log_base, "Display base: 2, e or 10")->check(CLI::IsMember({"2", "e", "10"}));
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", g.seed, "Seed for searches and the reproduce suite");
  app.add_option("--delta", g.delta, "Cone floor for the variational solver");
  app.add_option("--restarts", g.restarts, "Restarts for the local measurement search");

  // divergence
  std::string rho_spec, sigma_spec, alpha_text = "2", cls_text = "ppt", mode = "sandwich";
  int d = 2, n = 1;
  auto* div = app.add_subcommand("divergence", "Bounds on D_alpha for a pair of states");
  div->add_option("--rho", rho_spec, "phi, phi-perp, sym, antisym, iso:p, werner:p or raw:file")->required();
  div->add_option("--sigma", sigma_spec, "Same forms as --rho")->required();
  div->add_option("--d", d, "Local dimension");
  div->add_option("--n", n, "Number of copies");
  div->add_option("--alpha", alpha_text, "Order or list, e.g. 0.5,2,inf or 1.1:3:5");
  div->add_option("--class", cls_text, "lo, locc1, sep, ppt or all");
  div->add_option("--mode", mode, "lower, upper, sandwich or closedform")
      ->check(CLI::IsMember({"lower", "upper", "sandwich", "closedform"}));

  // maxdiv
  std::string certify_family;
  double cp = 0.0, cq = 0.0;
  auto* mx = app.add_subcommand("maxdiv", "PPT-measured max-divergence from both sides");
  mx->add_option("--rho", rho_spec)->required();
  mx->add_option("--sigma", sigma_spec)->required();
  mx->add_option("--d", d);
  mx->add_option("--n", n);
  mx->add_option("--certify", certify_family, "Also check an explicit certificate: phi_vs_perp, anti_vs_sym, iso, werner");
  mx->add_option("--p", cp, "Certificate parameter p");
  mx->add_option("--q", cq, "Certificate parameter q");

  // certify
  std::string family, output;
  auto* cert = app.add_subcommand("certify", "Explicit dual certificate as JSON");
  cert->add_option("--family", family, "phi_vs_perp, anti_vs_sym, iso or werner")->required();
  cert->add_option("--d", d);
  cert->add_option("--n", n);
  cert->add_option("--p", cp);
  cert->add_option("--q", cq);
  cert->add_option("--output", output, "Write the JSON here instead of stdout");

  // exponent
  std::string exp_kind = "stein", preset, curve_file, r_text = "1";
  bool attested = false;
  auto* ex = app.add_subcommand("exponent", "Stein or strong-converse exponent");
  ex->add_option("--kind", exp_kind)->check(CLI::IsMember({"stein", "sc"}));
  ex->add_option("--preset", preset, "phi_vs_iso, phi_vs_perp or anti_vs_werner");
  ex->add_option("--curve", curve_file, "JSON curve file with per-copy values for alpha > 1");
  ex->add_option("--attested", attested, "The curve comes with an additivity certificate");
  ex->add_option("--d", d);
  ex->add_option("--q", cq);
  ex->add_option("--r", r_text, "Rate or list of rates (nats)");

  // sweep
  std::string sweep_family = "iso", d_text = "2", p_text = "1", q_text = "0:1:11", what = "closedform";
  auto* sw = app.add_subcommand("sweep", "Cartesian sweep over d, p, q and alpha");
  sw->add_option("--family", sweep_family)->check(CLI::IsMember({"iso", "werner"}));
  sw->add_option("--d", d_text);
  sw->add_option("--p", p_text);
  sw->add_option("--q", q_text);
  sw->add_option("--alpha", alpha_text);
  sw->add_option("--n", n);
  sw->add_option("--what", what)->check(CLI::IsMember({"closedform", "program", "upper", "lower"}));

  // reproduce
  std::vector<int> only;
  auto* rep = app.add_subcommand("reproduce", "Run the acceptance suite and print a scorecard");
  rep->add_option("--only", only, "Criterion ids to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (d < 2) throw UsageError("--d must be at least 2");
    if (n < 1) throw UsageError("--n must be at least 1");

    if (*div) {
      const MeasurementClass cls = measurement_class_from_string(cls_text);
      const std::vector<double> alphas = parse_list(alpha_text, "--alpha");
      const DensityOp rho = load_state(rho_spec, d, n, "--rho"), sigma = load_state(sigma_spec, d, n, "--sigma");
      std::vector<Row> rows;
      for (double a : alphas) {
        if (!(a > 0)) throw UsageError("--alpha must be positive");
        const Row base = base_row(rho_spec, sigma_spec, d, n, a);
        if (mode == "closedform") {
          rows.push_back(closedform_row(base, rho_spec, sigma_spec, d, n, cls));
          continue;
        }
        if (mode == "lower" || mode == "sandwich")
          rows.push_back(lower_row(base, rho, sigma, mode == "lower" ? cls : MeasurementClass::LO, g));
        if (mode == "upper" || mode == "sandwich")
          rows.push_back(upper_row(base, rho, sigma, mode == "upper" ? cls : (cls == MeasurementClass::LO ||
                                                                               cls == MeasurementClass::LOCC1
                                                                           ? MeasurementClass::PPT
                                                                           : cls),
                                   g));
      }
      emit(rows, g);
      return 0;
    }

    if (*mx) {
      const DensityOp rho = load_state(rho_spec, d, n, "--rho"), sigma = load_state(sigma_spec, d, n, "--sigma");
      const Row base = base_row(rho_spec, sigma_spec, d, n, kAlphaInfinity);
      std::vector<Row> rows;
      Row unrestricted = base;
      unrestricted.cls = "ALL";
      unrestricted.kind = "exact";
      unrestricted.value = quantum_max_divergence(rho, sigma);
      unrestricted.status = "closed form";
      rows.push_back(unrestricted);

      MaxDivConfig cfg;
      cfg.cone.delta = g.delta;
      const BoundResult primal = ppt_max_primal(rho, sigma, cfg);
      Row pr = base;
      pr.cls = "PPT";
      pr.kind = to_string(primal.kind);
      pr.value = primal.value;
      pr.status = to_string(primal.status);
      rows.push_back(pr);

      Row du = base;
      du.cls = "PPT";
      du.kind = "upper";
      try {
        cfg.lambda_lo = std::exp(primal.value.value);
        const BoundResult dual = ppt_max_dual(rho, sigma, cfg);
        du.value = dual.value;
        du.status = to_string(dual.status);
        Row gap = base;
        gap.cls = "PPT";
        gap.kind = "gap";
        gap.value = ExtReal::finite(dual.value.value - primal.value.value);
        gap.status = "dual minus primal";
        rows.push_back(du);
        rows.push_back(gap);
      } catch (const SolverError& e) {
        du.value = ExtReal::finite(std::nan(""));
        du.status = std::string("error: ") + e.what();
        rows.push_back(du);
      } catch (const ResourceError& e) {
        du.value = ExtReal::finite(std::nan(""));
        du.status = std::string("skipped: ") + e.what();
        rows.push_back(du);
      }

      if (!certify_family.empty()) {
        const CertFamily f = cert_family_from_string(certify_family);
        const DualCertificate c = explicit_certificate(f, d, n, cp, cq);
        const CertCheck chk = check_certificate(c, rho, sigma);
        Row cr = base;
        cr.cls = "PPT";
        cr.kind = "certificate";
        cr.value = ExtReal::finite(std::log(c.lambda));
        cr.status = std::string(chk.pass ? "PASS" : "FAIL") + " " + to_string(f) + " residual " +
                    short_num(chk.residual);
        rows.push_back(cr);
      }
      emit(rows, g);
      return 0;
    }

    if (*cert) {
      const CertFamily f = cert_family_from_string(family);
      const DualCertificate c = explicit_certificate(f, d, n, cp, cq);
      const auto [rho, sigma] = certificate_states(f, d, n, cp, cq);
      const CertCheck chk = check_certificate(c, rho, sigma);
      nlohmann::json j = {{"certificate", certificate_to_json(c)},
                          {"check",
                           {{"pass", chk.pass},
                            {"min_eig_x", chk.min_eig_x},
                            {"min_eig_y", chk.min_eig_y},
                            {"residual", chk.residual}}}};
      if (output.empty()) {
        std::cout << j.dump(2) << "\n";
      } else {
        std::ofstream out(output);
        if (!out) throw StructuralError("cannot write '" + output + "'");
        out << j.dump(2) << "\n";
      }
      std::cerr << (chk.pass ? "PASS" : "FAIL") << ": " << to_string(f) << " d=" << d << " n=" << n
                << " lambda=" << c.lambda << " residual=" << chk.residual << " min_eig_y=" << chk.min_eig_y << "\n";
      return chk.pass ? 0 : 3;
    }

    if (*ex) {
      if (preset.empty() == curve_file.empty()) throw UsageError("give exactly one of --preset and --curve");
      std::optional<ExponentPreset> ps;
      DivergenceCurve curve;
      if (!preset.empty()) {
        ps = exponent_preset_from_string(preset);
        curve = preset_curve(*ps, d, cq);
      } else {
        std::ifstream in(curve_file);
        if (!in) throw StructuralError("cannot open curve file '" + curve_file + "'");
        nlohmann::json j;
        try {
          in >> j;
        } catch (const nlohmann::json::exception& e) {
          throw StructuralError(std::string("malformed curve file: ") + e.what());
        }
        curve = curve_from_json(j);
      }
      const auto status_of = [&](const ExponentResult& e) {
        if (!e.valid) return std::string("invalid: parameters outside the proven region");
        std::string s = e.certified ? "exact" : "achievable bound (regularization not certified)";
        if (e.clipped) s += "; clipped at 0 (r below the divergence)";
        return s;
      };
      std::vector<Row> rows;
      Row base;
      base.family = ps ? to_string(*ps) : curve.provenance;
      base.d = d;
      base.n = 1;
      if (ps && *ps != ExponentPreset::PhiVsPerp) base.q = cq;
      base.cls = "PPT";
      if (exp_kind == "stein") {
        const ExponentResult e = ps ? stein_exponent(*ps, d, cq) : stein_exponent(curve, attested);
        Row r = base;
        r.alpha = 1.0;
        r.kind = "stein";
        r.value = ExtReal::finite(e.value);
        r.status = status_of(e);
        rows.push_back(r);
      } else {
        for (double rate : parse_list(r_text, "--r")) {
          ExponentResult e = ps ? strong_converse_exponent(rate, *ps, d, cq) : strong_converse_exponent(rate, curve);
          if (!ps) e.certified = attested;
          Row r = base;
          r.alpha = e.alpha_star;
          r.kind = "strong_converse r=" + short_num(rate);
          r.value = ExtReal::finite(e.value);
          r.status = status_of(e);
          rows.push_back(r);
        }
      }
      emit(rows, g);
      return 0;
    }

    if (*sw) {
      struct Point {
        int d;
        double p, q, alpha;
      };
      std::vector<Point> points;
      for (double dv : parse_list(d_text, "--d"))
        for (double p : parse_list(p_text, "--p"))
          for (double q : parse_list(q_text, "--q"))
            for (double a : parse_list(alpha_text, "--alpha")) points.push_back({int(dv), p, q, a});
      std::vector<Row> rows(points.size());
      std::atomic<std::size_t> next{0};
      std::mutex err_mutex;
      std::string first_error;
      const bool iso = sweep_family == "iso";
      auto work = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
          const Point& pt = points[i];
          Row r;
          r.family = sweep_family;
          r.d = pt.d;
          r.n = n;
          r.p = pt.p;
          r.q = pt.q;
          r.alpha = pt.alpha;
          try {
            if (what == "closedform") {
              r.cls = "PPT";
              r.kind = "exact";
              r.status = "closed form";
              if (iso)
                r.value = iso_measured(pt.d, pt.p, pt.q, pt.alpha);
              else if (pt.p == 0.0)
                r.value = werner_measured(pt.d, pt.q, WernerTarget::AntiVsWerner, pt.alpha);
              else
                r.value = ExtReal::finite(std::nan("")), r.status = "no closed form for this Werner pair";
            } else if (what == "program") {
              r.cls = "PPT";
              r.kind = "upper";
              r.status = "scalar program";
              r.value = solve_scalar_program(
                  {iso ? ProgramKind::IsoPrimal : ProgramKind::WernerPrimal, pt.d, pt.p, pt.q, pt.alpha});
            } else {
              const Family fam = iso ? Family::Isotropic : Family::Werner;
              const DensityOp rho = make_state(fam, pt.d, pt.p), sigma = make_state(fam, pt.d, pt.q);
              const DensityOp rn = n > 1 ? tensor_power(rho, n) : rho, sn = n > 1 ? tensor_power(sigma, n) : sigma;
              r = what == "upper" ? upper_row(r, rn, sn, MeasurementClass::PPT, g)
                                  : lower_row(r, rn, sn, MeasurementClass::LO, g);
            }
          } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (first_error.empty()) first_error = e.what();
            r.value = ExtReal::finite(std::nan(""));
            r.status = std::string("error: ") + e.what();
          }
          rows[i] = r;
        }
      };
      std::vector<std::thread> pool;
      const unsigned workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(1, points.size()));
      for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
      for (auto& t : pool) t.join();
      std::sort(rows.begin(), rows.end());
      emit(rows, g);
      return 0;
    }

    if (*rep) {
      AcceptanceConfig cfg;
      cfg.seed = g.seed == 1 ? cfg.seed : g.seed;
      cfg.only = only;
      cfg.on_result = [](const CriterionResult& r) { std::cout << format_result(r) << std::endl; };
      int failed = 0;
      for (const auto& r : run_acceptance(cfg)) failed += r.pass ? 0 : 1;
      std::cout << (failed == 0 ? "scorecard: all criteria passed" : "scorecard: " + std::to_string(failed) + " failed")
                << std::endl;
      return failed == 0 ? 0 : 1;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
