#include "qtele/pdc.hpp"

#include <cmath>

namespace qtele {

namespace {

void require_weak(const Scalar& r) {
  if (r.sign() < 0 || !(r < Scalar(1)) || (!r.is_exact() && !(r.to_double() < 1.0))) {
    throw PdcError("pair amplitude r must satisfy 0 <= r < 1, got " + r.str());
  }
}

Scalar exp_neg(const Scalar& p) {
  if (p.is_exact()) return 1;
  return Scalar::floating(std::exp(-p.to_double()));
}

}  // namespace

PdcParams PdcParams::from_tau(double tau) {
  const double r = std::tanh(tau);
  const double q = 2.0 * std::log(std::cosh(tau));
  PdcParams params = from_r(Scalar::floating(r));
  params.tau = tau;
  params.q = q;
  params.vacuum_weight_sq = Scalar::floating(std::exp(-2.0 * q));
  return params;
}

PdcParams PdcParams::from_r(const Scalar& r) {
  require_weak(r);
  const Scalar r2 = r * r;
  const Scalar one = r.is_exact() ? Scalar(1) : Scalar::floating(1.0);
  return {r, 2 * r2, (one - r2) * (one - r2), std::nullopt, std::nullopt};
}

Ket pdc_component(const ModePair& a, const ModePair& b, const Scalar& r, unsigned l,
                  unsigned photon_cap) {
  if (2 * l > photon_cap) {
    throw std::logic_error(std::to_string(l) + " pairs exceed photon cap " +
                           std::to_string(photon_cap));
  }
  Ket v = Ket::vacuum();
  v.set_photon_cap(photon_cap);
  for (unsigned i = 0; i < l; ++i) v = l_plus(v, a, b);
  return v * (r.pow(l) / factorial(l));
}

Ket pdc_state(const SourceSpec& spec, unsigned photon_cap) {
  require_weak(spec.r);
  Ket state(Convention::divided_power);
  state.set_photon_cap(photon_cap);
  for (unsigned l = 0; l <= spec.max_pairs; ++l) {
    state += pdc_component(spec.pair_a, spec.pair_b, spec.r, l, photon_cap);
  }
  return state;
}

Scalar p_pdc(unsigned n, const Scalar& r) {
  require_weak(r);
  const Scalar r2 = r * r;
  const Scalar one = r.is_exact() ? Scalar(1) : Scalar::floating(1.0);
  return Scalar(n + 1) * r2.pow(n) * (one - r2) * (one - r2);
}

Scalar p_pdc_small(unsigned n, const Scalar& p) {
  if (p.sign() < 0) throw PdcError("pair probability must be non-negative");
  return Scalar(n + 1) * (p / 2).pow(n) * exp_neg(p);
}

Scalar p_poisson(unsigned n, const Scalar& p) {
  if (p.sign() < 0) throw PdcError("pair probability must be non-negative");
  return p.pow(n) / factorial(n) * exp_neg(p);
}

Scalar statistical_distance_sq(const Scalar& p, unsigned n_max) {
  if (p.sign() <= 0) throw PdcError("statistical distance needs p > 0");
  Scalar sum = p.is_exact() ? Scalar(0) : Scalar::floating(0.0);
  for (unsigned n = 1; n <= n_max; ++n) {
    const Scalar base = p_poisson(n, p);
    const Scalar diff = p_pdc_small(n, p) - base;
    sum += diff * diff / base;
  }
  return sum;
}

Scalar distinguishability_trials(const Scalar& p) { return Scalar(8) / (p * p); }

Scalar expected_trials(const Scalar& p) { return (p * p).inverse(); }

Scalar expected_trials(const Scalar& p1, const Scalar& p2) { return (p1 * p2).inverse(); }

}  // namespace qtele
