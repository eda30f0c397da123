#pragma once

#include "qtele/optics.hpp"

namespace qtele {

class PdcError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Down-converter strength. tau = kappa t is the scaled interaction time,
/// r = tanh tau, q = 2 ln cosh tau, p = 2 r^2 the single-pair probability.
///
/// In exact mode only r is known; tau and q stay implicit and enter through
/// e^{-2q} = (1 - r^2)^2.
struct PdcParams {
  Scalar r;
  Scalar p;
  /// e^{-2q}
  Scalar vacuum_weight_sq;
  /// Present only when built from tau (floating).
  std::optional<double> tau;
  std::optional<double> q;

  static PdcParams from_tau(double tau);
  static PdcParams from_r(const Scalar& r);
};

struct SourceSpec {
  ModePair pair_a;
  ModePair pair_b;
  Scalar r;
  unsigned max_pairs = 0;
};

/// r^l / l! L+^l |0>, the l-pair component of the source state.
Ket pdc_component(const ModePair& a, const ModePair& b, const Scalar& r, unsigned l,
                  unsigned photon_cap);

/// sum_{l=0..K} r^l / l! L+^l |0>. The common factor e^{-q} is dropped.
Ket pdc_state(const SourceSpec& spec, unsigned photon_cap);

/// (n+1) r^{2n} (1 - r^2)^2
Scalar p_pdc(unsigned n, const Scalar& r);

/// Small-p form (n+1) (p/2)^n e^{-p}. Exact mode drops e^{-p}.
Scalar p_pdc_small(unsigned n, const Scalar& p);

/// p^n e^{-p} / n!. Exact mode drops e^{-p}.
Scalar p_poisson(unsigned n, const Scalar& p);

/// sum_{n=1..n_max} (P_pdc(n) - P_poisson(n))^2 / P_poisson(n), both in
/// small-p form with the Poisson distribution as base measure. Exact mode
/// drops the overall e^{-p}.
Scalar statistical_distance_sq(const Scalar& p, unsigned n_max);

/// 8 / p^2
Scalar distinguishability_trials(const Scalar& p);
/// 1 / p^2
Scalar expected_trials(const Scalar& p);
/// 1 / (p1 p2)
Scalar expected_trials(const Scalar& p1, const Scalar& p2);

}  // namespace qtele
