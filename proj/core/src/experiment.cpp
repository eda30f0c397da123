#include "qtele/experiment.hpp"

#include <cmath>
#include <numbers>

namespace qtele {

namespace {

bool is_floating(const Scalar& s) { return !s.is_exact(); }

void require_probability(const Scalar& p, const char* name) {
  if (p.sign() <= 0 || !(p < Scalar(1))) {
    throw ConfigError(std::string(name) + " must satisfy 0 < p < 1, got " + p.str());
  }
}

void require_efficiency(const Scalar& eta_sq, const char* name) {
  if (eta_sq.sign() < 0 || eta_sq > Scalar(1)) {
    throw ConfigError(std::string(name) + " must lie in [0, 1], got " + eta_sq.str());
  }
}

}  // namespace

Angle Angle::from_degrees(double degrees) {
  const double rad = degrees * std::numbers::pi / 180.0;
  return {Scalar::floating(std::cos(rad)), Scalar::floating(std::sin(rad))};
}

void Angle::validate() const {
  const Scalar norm = cos * cos + sin * sin;
  const bool ok = norm.is_exact() ? norm == Scalar(1) : std::fabs(norm.to_double() - 1.0) <= 1e-12;
  if (!ok) throw ConfigError("theta requires cos^2 + sin^2 = 1");
}

void ExperimentConfig::validate() const {
  if (truncation_order != 2 && truncation_order != 3) {
    throw ConfigError("order must be 2 or 3, got " + std::to_string(truncation_order));
  }
  require_probability(p1, "p1");
  require_probability(p2, "p2");
  theta.validate();
  require_efficiency(eta_u_sq, "eta_u_sq");
  require_efficiency(eta_v_sq, "eta_v_sq");
  require_efficiency(cascade.eta_c_sq, "eta_c_sq");
  if (cascade.n_detectors < 1) throw ConfigError("cascade_n must be at least 1");
}

ScalarMode ExperimentConfig::mode() const {
  for (const Scalar* s : {&p1, &p2, &theta.cos, &theta.sin, &eta_u_sq, &eta_v_sq,
                          &cascade.eta_c_sq}) {
    if (is_floating(*s)) return ScalarMode::floating;
  }
  return ScalarMode::exact;
}

std::string PairOrder::str() const {
  return "(" + std::to_string(source1) + "," + std::to_string(source2) + ")";
}

// ------------------------------------------------------------ OrderedDensity

const DensityOperator* OrderedDensity::block(unsigned i, unsigned j) const {
  auto it = blocks_.find(PairOrder{i, j});
  return it == blocks_.end() ? nullptr : &it->second;
}

void OrderedDensity::set_block(PairOrder order, DensityOperator rho) {
  if (rho.is_zero()) {
    blocks_.erase(order);
    return;
  }
  blocks_.insert_or_assign(order, std::move(rho));
}

DensityOperator OrderedDensity::combined(const Scalar& p1, const Scalar& p2) const {
  DensityOperator total(modes_);
  for (const auto& [order, rho] : blocks_) {
    total += rho * (p1.pow(order.source1) * p2.pow(order.source2));
  }
  return total;
}

IdealState IdealState::make(const Angle& theta, const ModePair& bob) {
  theta.validate();
  const BasisKet x1 = BasisKet::of({{bob.x, 1}});
  const BasisKet y1 = BasisKet::of({{bob.y, 1}});
  IdealState s{theta, Ket(), Ket()};
  s.psi.add(y1, theta.cos);
  s.psi.add(x1, theta.sin);
  s.psi_perp.add(y1, theta.sin);
  s.psi_perp.add(x1, -theta.cos);
  return s;
}

// ---------------------------------------------------------------- pipeline

DensityOperator measured_component(const ExperimentConfig& config, unsigned i, unsigned j) {
  const SetupModes m;
  const ScalarMode smode = config.mode();
  const unsigned cap = config.photon_cap();

  Ket state = pdc_component(m.a, m.b, 1, i, cap);
  for (unsigned l = 0; l < j; ++l) state = l_plus(state, m.c, m.d);
  state *= factorial(j).inverse();

  state = beam_splitter(state, BeamSplitterSpec::balanced(m.b.x, m.c.x, m.u.x, m.v.x, smode));
  state = beam_splitter(state, BeamSplitterSpec::balanced(m.b.y, m.c.y, m.u.y, m.v.y, smode));
  state = polarization_rotation(state, {m.a, config.theta.cos, config.theta.sin});

  const CascadeTree tree =
      build_cascade_tree(m.a.x, config.cascade.n_detectors, config.cascade.topology, smode);
  state = apply_cascade_tree(state, tree);

  std::vector<DiagonalPovm> povms;
  povms.push_back(povm_exactly_one_click(tree.leaves, config.cascade.eta_c_sq));
  if (config.cascade.y_policy == YPolicy::no_click) {
    povms.push_back(povm_no_click(m.a.y, config.cascade.eta_c_sq));
  }
  povms.push_back(povm_click_unpolarized(m.u.x, m.u.y, config.eta_u_sq));
  povms.push_back(povm_click_unpolarized(m.v.x, m.v.y, config.eta_v_sq));

  ModeSet traced(tree.leaves.begin(), tree.leaves.end());
  traced.insert({m.a.y, m.u.x, m.u.y, m.v.x, m.v.y});
  return apply_measurement(state, povms, traced, m.bob());
}

OrderedDensity build_output_state(const ExperimentConfig& config) {
  config.validate();
  const SetupModes m;
  OrderedDensity out(m.bob());
  const Scalar half = config.mode() == ScalarMode::exact ? Scalar::fraction(1, 2)
                                                        : Scalar::floating(0.5);
  for (unsigned i = 0; i <= config.truncation_order; ++i) {
    for (unsigned j = 0; i + j <= config.truncation_order; ++j) {
      // r^2 = p / 2 per created pair
      out.set_block({i, j}, measured_component(config, i, j) * half.pow(i + j));
    }
  }
  return out;
}

// ---------------------------------------------------------------- fidelity

Scalar fidelity(const DensityOperator& rho, const IdealState& ideal) {
  const Scalar tr = dm_trace(rho);
  if (tr.is_zero()) throw std::domain_error("fidelity of a zero-trace state");
  return rho.expectation(ideal.psi) / tr;
}

Scalar fidelity(const OrderedDensity& rho, const Scalar& p1, const Scalar& p2,
                const IdealState& ideal) {
  return fidelity(rho.combined(p1, p2), ideal);
}

Scalar vacuum_signal_ratio(const DensityOperator& rho, const IdealState& ideal) {
  const Scalar signal = rho.expectation(ideal.psi);
  if (signal.is_zero()) throw std::domain_error("state has no overlap with the ideal state");
  return rho.entry(BasisKet::vacuum(), BasisKet::vacuum()) / signal;
}

Scalar f2_formula(unsigned n, const Scalar& p1, const Scalar& p2, const Scalar& eta_c_sq) {
  if (n < 1) throw ConfigError("cascade needs at least one detector");
  const Scalar nn(n);
  const Scalar bracket = 1 + Scalar(5 * static_cast<long>(n) - 3) * (1 - eta_c_sq);
  return nn * p2 / (p1 * bracket + nn * p2);
}

Scalar f2_threshold(unsigned n, const Scalar& p1, const Scalar& p2) {
  if (n < 1) throw ConfigError("cascade needs at least one detector");
  const long nl = static_cast<long>(n);
  return (Scalar(15 * nl - 6) * p1 - Scalar(nl) * p2) / (Scalar(15 * nl - 9) * p1);
}

Scalar f2_threshold_limit(const Scalar& p1, const Scalar& p2) {
  return (15 * p1 - p2) / (15 * p1);
}

InnsbruckResult innsbruck_variant(const ExperimentConfig& config) {
  if (config.cascade.n_detectors != 1) throw ConfigError("the Innsbruck setup has no cascade");
  if (config.cascade.y_policy != YPolicy::trace_out) {
    throw ConfigError("the Innsbruck setup leaves a_y undetected");
  }
  if (config.p1 != config.p2) throw ConfigError("the Innsbruck setup pumps one source twice");
  ExperimentConfig second = config;
  second.truncation_order = 2;
  const IdealState ideal = IdealState::make(config.theta);
  const DensityOperator rho = build_output_state(second).combined(config.p1, config.p2);
  const Scalar signal = rho.expectation(ideal.psi);
  if (signal.is_zero()) throw std::domain_error("no teleported signal");
  return {rho * signal.inverse(), fidelity(rho, ideal), vacuum_signal_ratio(rho, ideal)};
}

Scalar f3_formula(const Scalar& p, const Scalar& eta_sq) {
  const Scalar e2 = eta_sq;
  const Scalar e4 = e2 * e2;
  const Scalar e6 = e4 * e2;
  const Scalar two_minus = 2 - e2;
  const Scalar num = 4 + p * two_minus * two_minus;
  const Scalar den = 4 * (4 - e2) + p * (80 - 76 * e2 + 34 * e4 - 3 * e6);
  return num / den;
}

Scalar efficiency_sensitivity(const Scalar& eta_minus_sq, const Scalar& eta_plus_sq) {
  // p1 = p2 cancels in the ratio
  const Scalar p = 1;
  const Scalar high = f2_formula(1, p, p, eta_plus_sq);
  const Scalar low = f2_formula(1, p, p, eta_minus_sq);
  return (high - low) / high;
}

Scalar required_p2(const Scalar& p1, const Scalar& eta_c_sq) {
  return 3 * (3 - eta_c_sq) * p1;
}

Scalar pump_ratio(const Scalar& x) {
  if (x.sign() < 0) throw ConfigError("pump ratio needs x >= 0");
  if (x.is_exact()) {
    try {
      return x.sqrt();
    } catch (const ScalarError&) {
      return x.to_floating().sqrt();
    }
  }
  return x.sqrt();
}

// ------------------------------------------------------------ partitions

PartitionDemo partition_demo(const Scalar& alpha_sq, const Scalar& beta_sq,
                             const IdealState& ideal) {
  if (alpha_sq.sign() < 0 || beta_sq.sign() < 0) {
    throw std::domain_error("mixture weights must be non-negative");
  }
  const ModePair bob = modes::pair("d");
  const ModeSet bob_modes{bob.x, bob.y};
  const Ket vac = Ket::vacuum();

  PartitionDemo demo;
  demo.mixture = alpha_sq * outer(vac, bob_modes) + beta_sq * outer(ideal.psi, bob_modes);
  demo.partition = DensityOperator(bob_modes);
  demo.coherence = DensityOperator(bob_modes);

  const Scalar half = Scalar::fraction(1, 2);
  std::optional<Scalar> alpha, beta;
  try {
    alpha = alpha_sq.sqrt();
    beta = beta_sq.sqrt();
  } catch (const ScalarError&) {
    alpha.reset();
  }

  if (alpha && beta) {
    // Both amplitudes exist: build the two pure states outright.
    const Ket psi1 = *alpha * vac + *beta * ideal.psi;
    const Ket psi2 = *alpha * vac - *beta * ideal.psi;
    demo.partition = half * outer(psi1, bob_modes) + half * outer(psi2, bob_modes);
  } else {
    // |psi+-><psi+-| = a^2 |0><0| + b^2 |Psi><Psi| +- ab (|0><Psi| + |Psi><0|)
    for (int s : {+1, -1}) {
      demo.partition += half * (alpha_sq * outer(vac, vac, bob_modes) +
                                beta_sq * outer(ideal.psi, ideal.psi, bob_modes));
      demo.coherence += (half * Scalar(s)) *
                        (outer(vac, ideal.psi, bob_modes) + outer(ideal.psi, vac, bob_modes));
    }
  }
  demo.equal = demo.partition == demo.mixture && demo.coherence.is_zero();
  return demo;
}

bool cross_term_check(const OrderedDensity& rho) {
  for (const auto& [order, block] : rho.blocks()) {
    for (const auto& [key, value] : block.entries()) {
      if (value.is_zero()) continue;
      const unsigned ket_n = key.first.restricted(rho.modes()).total_photons();
      const unsigned bra_n = key.second.restricted(rho.modes()).total_photons();
      if (ket_n != bra_n || ket_n != order.source2) return false;
    }
  }
  return true;
}

// -------------------------------------------------------- reference shapes

DensityOperator rho1(const ModePair& bob) {
  DensityOperator r({bob.x, bob.y});
  const Scalar half = Scalar::fraction(1, 2);
  const BasisKet x1 = BasisKet::of({{bob.x, 1}});
  const BasisKet y1 = BasisKet::of({{bob.y, 1}});
  r.add(x1, x1, half);
  r.add(y1, y1, half);
  return r;
}

DensityOperator rho2(const Angle& theta, const ModePair& bob) {
  const Scalar cos2 = theta.cos * theta.cos - theta.sin * theta.sin;
  const Scalar sin2 = 2 * theta.sin * theta.cos;
  const Scalar sixth = Scalar::fraction(1, 6);
  // |n_x, n_y> on (d_x, d_y)
  const BasisKet k02 = BasisKet::of({{bob.y, 2}});
  const BasisKet k20 = BasisKet::of({{bob.x, 2}});
  const BasisKet k11 = BasisKet::of({{bob.x, 1}, {bob.y, 1}});
  DensityOperator r({bob.x, bob.y});
  r.add_physical(k02, k02, sixth * (2 + cos2));
  r.add_physical(k20, k20, sixth * (2 - cos2));
  r.add_physical(k11, k11, sixth * 2);
  const Scalar coherence = sixth * Scalar::fraction(1, 2) * Scalar::sqrt2_inject(sin2);
  for (const auto& two : {k20, k02}) {
    r.add_physical(two, k11, coherence);
    r.add_physical(k11, two, coherence);
  }
  return r;
}

std::map<PairOrder, DensityOperator> printed_second_order_blocks(unsigned n,
                                                                 const Scalar& eta_c_sq,
                                                                 const IdealState& ideal) {
  const ModePair bob = modes::pair("d");
  const ModeSet bob_modes{bob.x, bob.y};
  const Scalar nn(n);
  const Scalar bracket = 1 + Scalar(5 * static_cast<long>(n) - 3) * (1 - eta_c_sq);
  std::map<PairOrder, DensityOperator> blocks;
  blocks.emplace(PairOrder{2, 0}, (bracket / nn) * outer(Ket::vacuum(), bob_modes));
  blocks.emplace(PairOrder{1, 1}, outer(ideal.psi, bob_modes));
  return blocks;
}

std::map<PairOrder, DensityOperator> printed_third_order_blocks(const Scalar& eta_c_sq,
                                                                const IdealState& ideal) {
  const ModePair bob = modes::pair("d");
  const ModeSet bob_modes{bob.x, bob.y};
  const Scalar e2 = eta_c_sq;
  std::map<PairOrder, DensityOperator> blocks;
  blocks.emplace(PairOrder{3, 0},
                 6 * (6 - 4 * e2 + e2 * e2) * outer(Ket::vacuum(), bob_modes));
  blocks.emplace(PairOrder{2, 1},
                 2 * (2 - e2) * (outer(ideal.psi, bob_modes) + outer(ideal.psi_perp, bob_modes)) +
                     8 * (3 - e2) * rho1(bob));
  blocks.emplace(PairOrder{1, 2}, Scalar(12) * rho2(ideal.theta, bob));
  return blocks;
}

std::optional<Scalar> proportionality(const DensityOperator& a, const DensityOperator& b) {
  if (b.is_zero()) return std::nullopt;
  const auto& [key, bv] = *b.entries().begin();
  const Scalar lambda = a.entry(key.first, key.second) / bv;
  if (lambda.is_zero()) return a.is_zero() ? std::optional<Scalar>(lambda) : std::nullopt;
  if (a.entries().size() != b.entries().size()) return std::nullopt;
  for (const auto& [k, v] : b.entries()) {
    if (a.entry(k.first, k.second) != lambda * v) return std::nullopt;
  }
  return lambda;
}

}  // namespace qtele
