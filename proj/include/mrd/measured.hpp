#pragma once

// Measured Renyi divergences: fixed measurements and lower-bound search over
// local measurements.

#include "mrd/bound.hpp"
#include "mrd/povm.hpp"
#include "mrd/varprog.hpp"

namespace mrd {

/// Renyi divergence of the outcome statistics of `povm`.
ExtReal divergence_with_povm(const DensityOp& rho, const DensityOp& sigma, const Povm& povm, double alpha);

/// Best rank-one local measurement on the dilations A (x) A and B (x) B, for
/// LO or one-way LOCC (A to B). The value is always a sound lower bound.
BoundResult optimize_measured(const DensityOp& rho, const DensityOp& sigma, double alpha, MeasurementClass cls,
                              const SearchConfig& cfg = {});

/// Lower bound inf_omega sqrt(tr[rho omega^-1] tr[sigma omega]) on the
/// measured fidelity. States without full support are mixed with 1e-10 of
/// the maximally mixed state first.
BoundResult measured_fidelity_bound(const DensityOp& rho, const DensityOp& sigma, const ConeSpec& cone,
                                    const SolverConfig& cfg = {});

}  // namespace mrd
