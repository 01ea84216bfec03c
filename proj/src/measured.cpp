#include "mrd/measured.hpp"

#include <cmath>

#include "local_search.hpp"
#include "mrd/states.hpp"

namespace mrd {

ExtReal divergence_with_povm(const DensityOp& rho, const DensityOp& sigma, const Povm& povm, double alpha) {
  return renyi(born(rho, povm), born(sigma, povm), alpha);
}

BoundResult optimize_measured(const DensityOp& rho, const DensityOp& sigma, double alpha, MeasurementClass cls,
                              const SearchConfig& cfg) {
  if (!(alpha > 0.0)) throw DomainError("Renyi order must be positive");
  if (cls != MeasurementClass::LO && cls != MeasurementClass::LOCC1)
    throw DomainError("measurement search supports the LO and LOCC1 classes");
  const detail::AbPair pair = detail::to_ab_order(rho, sigma);

  detail::LocalFamily lo{pair.da, pair.db, pair.da * pair.da, pair.db * pair.db, false};
  detail::SearchOutcome best =
      detail::search_local(pair, lo, alpha, cfg.restarts, cfg.max_evals, cfg.seed, cfg.tol);
  int evaluations = best.evaluations;
  detail::LocalFamily fam = lo;

  if (cls == MeasurementClass::LOCC1 && !std::isinf(best.value)) {
    // Continue from the best product measurement, one B unitary per A outcome.
    detail::LocalFamily one_way = lo;
    one_way.conditional = true;
    const int na = lo.out_a * lo.out_a, nb = lo.out_b * lo.out_b;
    Eigen::VectorXd start(one_way.param_count());
    start.head(na) = best.params.head(na);
    for (int x = 0; x < lo.out_a; ++x) start.segment(na + x * nb, nb) = best.params.tail(nb);
    detail::SearchOutcome cond = detail::search_local(pair, one_way, alpha, cfg.restarts, cfg.max_evals,
                                                      cfg.seed + 7919, cfg.tol, start);
    evaluations += cond.evaluations;
    if (cond.value >= best.value) {
      best = cond;
      fam = one_way;
    } else {
      fam = lo;
    }
  }

  BoundResult out;
  const detail::LocalMeasurement m = detail::decode(fam, best.params);
  out.povm = detail::to_povm(pair, fam, m, cls);
  out.value = std::isinf(best.value) ? ExtReal::inf() : ExtReal::finite(best.value);
  out.kind = BoundKind::Lower;
  out.alpha = alpha;
  out.measurement_class = cls;
  out.status = best.converged ? SolverStatus::Converged : SolverStatus::Budget;
  out.iterations = evaluations;
  return out;
}

BoundResult measured_fidelity_bound(const DensityOp& rho, const DensityOp& sigma, const ConeSpec& cone,
                                    const SolverConfig& cfg) {
  constexpr double kMix = 1e-10;
  std::string note;
  auto prepare = [&](const DensityOp& s) {
    if (lambda_min(s.op()) > 1e-12) return s;
    note = "inputs mixed with 1e-10 of the maximally mixed state";
    return full_support_mix(s, kMix);
  };
  const DensityOp r = prepare(rho), s = prepare(sigma);
  const VarResult v = variational_bound(r, s, 0.5, cone, cfg);

  BoundResult out;
  out.value = ExtReal::finite(std::exp(-v.value.as_double() / 2.0));
  out.kind = cone.kind == ConeKind::SEPInner ? BoundKind::Heuristic : BoundKind::Lower;
  out.alpha = 0.5;
  out.measurement_class = cone.kind == ConeKind::PSD ? MeasurementClass::ALL : MeasurementClass::PPT;
  if (cone.kind == ConeKind::SEPInner) out.measurement_class = MeasurementClass::SEP;
  out.status = v.status;
  out.iterations = v.iterations;
  out.omega = v.omega;
  out.note = note.empty() ? "measured fidelity bound" : "measured fidelity bound; " + note;
  return out;
}

}  // namespace mrd
