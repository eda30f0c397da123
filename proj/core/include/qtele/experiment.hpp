#pragma once

#include <map>
#include <optional>

#include "qtele/detection.hpp"
#include "qtele/pdc.hpp"

namespace qtele {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// (cos theta, sin theta) of the state-preparation polarization rotation.
struct Angle {
  Scalar cos = 1;
  Scalar sin = 0;

  static Angle from_degrees(double degrees);
  void validate() const;
};

/// Free parameters of the two-source teleportation setup.
struct ExperimentConfig {
  Scalar p1 = Scalar::fraction(1, 100);
  Scalar p2 = Scalar::fraction(1, 100);
  Angle theta;
  Scalar eta_u_sq = Scalar::fraction(1, 10);
  Scalar eta_v_sq = Scalar::fraction(1, 10);
  CascadeSpec cascade{1, Scalar::fraction(1, 10), YPolicy::trace_out, CascadeTopology::balanced};
  /// Total pair number kept across both sources: 2 or 3.
  unsigned truncation_order = 2;

  void validate() const;
  /// Floating if any parameter is floating.
  ScalarMode mode() const;
  unsigned photon_cap() const { return 2 * truncation_order; }
};

/// Mode labels of the unfolded setup. Source 1 fills (a, b), source 2 fills
/// (c, d); b and c meet on the Bell-measurement splitter with outputs u, v;
/// a carries the state-preparation rotation and cascade; d goes to Bob.
struct SetupModes {
  ModePair a = modes::pair("a");
  ModePair b = modes::pair("b");
  ModePair c = modes::pair("c");
  ModePair d = modes::pair("d");
  ModePair u = modes::pair("u");
  ModePair v = modes::pair("v");

  ModeSet bob() const { return {d.x, d.y}; }
};

/// Photon-pair counts (source 1, source 2); a block with these counts scales
/// as p1^source1 p2^source2.
struct PairOrder {
  unsigned source1 = 0;
  unsigned source2 = 0;

  friend auto operator<=>(const PairOrder&, const PairOrder&) = default;
  std::string str() const;
};

/// Conditional output on Bob's modes split by pair-production order:
/// rho = sum p1^i p2^j block(i, j). The common factor e^{-q1-q2} is dropped.
class OrderedDensity {
 public:
  explicit OrderedDensity(ModeSet modes) : modes_(std::move(modes)) {}

  const std::map<PairOrder, DensityOperator>& blocks() const { return blocks_; }
  const DensityOperator* block(unsigned i, unsigned j) const;
  void set_block(PairOrder order, DensityOperator rho);
  const ModeSet& modes() const { return modes_; }

  DensityOperator combined(const Scalar& p1, const Scalar& p2) const;

 private:
  ModeSet modes_;
  std::map<PairOrder, DensityOperator> blocks_;
};

/// |Psi_theta> = cos|0,1> + sin|1,0> and |Psi_perp> = sin|0,1> - cos|1,0>
/// in the (d_x, d_y) occupation order.
struct IdealState {
  Angle theta;
  Ket psi;
  Ket psi_perp;

  static IdealState make(const Angle& theta, const ModePair& bob = modes::pair("d"));
};

/// Source components, optics, cascade, POVMs and the trace over every
/// detected mode.
OrderedDensity build_output_state(const ExperimentConfig& config);

/// The measured two-source component (i pairs from source 1, j from
/// source 2), before the p-weights. Exposed for cross-checks.
DensityOperator measured_component(const ExperimentConfig& config, unsigned i, unsigned j);

/// <Psi|rho|Psi> / Tr rho
Scalar fidelity(const DensityOperator& rho, const IdealState& ideal);
Scalar fidelity(const OrderedDensity& rho, const Scalar& p1, const Scalar& p2,
                const IdealState& ideal);

/// <0|rho|0> / <Psi|rho|Psi>
Scalar vacuum_signal_ratio(const DensityOperator& rho, const IdealState& ideal);

/// n p2 / (p1 [1 + (5n-3)(1-eta_c^2)] + n p2)
Scalar f2_formula(unsigned n, const Scalar& p1, const Scalar& p2, const Scalar& eta_c_sq);
/// ((15n-6) p1 - n p2) / ((15n-9) p1), the eta_c^2 needed for F >= 3/4.
Scalar f2_threshold(unsigned n, const Scalar& p1, const Scalar& p2);
/// n -> infinity limit of f2_threshold: (15 p1 - p2) / (15 p1).
Scalar f2_threshold_limit(const Scalar& p1, const Scalar& p2);

struct InnsbruckResult {
  /// Second-order state scaled so the |Psi><Psi| coefficient is 1.
  DensityOperator state;
  Scalar fidelity;
  Scalar vacuum_signal_ratio;
};

/// No cascade, a_y undetected, one source pumped twice (p1 = p2).
InnsbruckResult innsbruck_variant(const ExperimentConfig& config);

/// [4 + p(2-eta^2)^2] / [4(4-eta^2) + p(80 - 76 eta^2 + 34 eta^4 - 3 eta^6)]
Scalar f3_formula(const Scalar& p, const Scalar& eta_sq);

/// (F2(eta+) - F2(eta-)) / F2(eta+) with the single-detector form of f2.
Scalar efficiency_sensitivity(const Scalar& eta_minus_sq, const Scalar& eta_plus_sq);

/// 3 (3 - eta_c^2) p1
Scalar required_p2(const Scalar& p1, const Scalar& eta_c_sq);

/// tanh(k2 t)/tanh(k1 t) = sqrt(x) for p2 = x p1. Exact when the root lies
/// in Q(sqrt 2), floating otherwise.
Scalar pump_ratio(const Scalar& x);

struct PartitionDemo {
  /// |a|^2 |0><0| + |b|^2 |Psi><Psi|
  DensityOperator mixture;
  /// Part of 1/2 |psi1><psi1| + 1/2 |psi2><psi2| free of the product a b.
  DensityOperator partition;
  /// Coefficient operator of a b in the same sum; zero when the two
  /// decompositions agree.
  DensityOperator coherence;
  bool equal = false;
};

/// Builds psi_{1,2} = a|0> +- b|Psi> with a b kept as a formal factor, since
/// a and b need not lie in Q(sqrt 2).
PartitionDemo partition_demo(const Scalar& alpha_sq, const Scalar& beta_sq,
                             const IdealState& ideal);

/// Every block is diagonal in Bob's total photon number and block (i, j)
/// holds only j-photon terms.
bool cross_term_check(const OrderedDensity& rho);

/// rho1 = (|1,0><1,0| + |0,1><0,1|) / 2 on Bob's modes.
DensityOperator rho1(const ModePair& bob = modes::pair("d"));
/// The two-photon third-order state with its sqrt(2) sin 2theta coherences.
DensityOperator rho2(const Angle& theta, const ModePair& bob = modes::pair("d"));

/// Closed-form block shapes as printed for the two lowest orders, keyed by
/// pair order, up to one common factor per order.
std::map<PairOrder, DensityOperator> printed_second_order_blocks(unsigned n,
                                                                 const Scalar& eta_c_sq,
                                                                 const IdealState& ideal);
std::map<PairOrder, DensityOperator> printed_third_order_blocks(const Scalar& eta_c_sq,
                                                                const IdealState& ideal);

/// lambda with a = lambda * b entrywise, if one exists (b nonzero).
std::optional<Scalar> proportionality(const DensityOperator& a, const DensityOperator& b);

}  // namespace qtele
