#include <gtest/gtest.h>

#include <cmath>

#include "oracle/fock_oracle.hpp"
#include "qtele/experiment.hpp"

using namespace qtele;

namespace {

ExperimentConfig make_config(unsigned n, const Scalar& eta, YPolicy y, CascadeTopology topo,
                             unsigned order) {
  ExperimentConfig c;
  c.theta = {Scalar::fraction(3, 5), Scalar::fraction(4, 5)};
  c.eta_u_sq = c.eta_v_sq = eta;
  c.cascade = {n, eta, y, topo};
  c.truncation_order = order;
  return c;
}

oracle::Setup oracle_setup(const ExperimentConfig& c) {
  oracle::Setup s;
  s.cascade_n = static_cast<int>(c.cascade.n_detectors);
  s.chain = c.cascade.topology == CascadeTopology::chain;
  s.y_no_click = c.cascade.y_policy == YPolicy::no_click;
  s.eta_u = c.eta_u_sq.to_double();
  s.eta_v = c.eta_v_sq.to_double();
  s.eta_c = c.cascade.eta_c_sq.to_double();
  s.cos_t = c.theta.cos.to_double();
  s.sin_t = c.theta.sin.to_double();
  return s;
}

BasisKet bob(unsigned nx, unsigned ny) { return BasisKet::of({{"d_x", nx}, {"d_y", ny}}); }

oracle::Monomial mono(unsigned nx, unsigned ny) {
  oracle::Monomial m;
  if (nx) m["d_x"] = static_cast<int>(nx);
  if (ny) m["d_y"] = static_cast<int>(ny);
  return m;
}

// Compares every entry of a library block with the oracle block.
void expect_block_matches(const DensityOperator& lib, const oracle::Density& ref,
                          const std::string& label) {
  for (unsigned a = 0; a <= 3; ++a) {
    for (unsigned b = 0; a + b <= 3; ++b) {
      for (unsigned c = 0; c <= 3; ++c) {
        for (unsigned d = 0; c + d <= 3; ++d) {
          const auto it = ref.find({mono(a, b), mono(c, d)});
          const double want = it == ref.end() ? 0.0 : it->second;
          const double got = lib.physical_entry(bob(a, b), bob(c, d)).to_double();
          EXPECT_NEAR(got, want, 1e-12 * std::max(1.0, std::fabs(want)))
              << label << " <" << a << b << "|" << c << d << ">";
        }
      }
    }
  }
}

Scalar eta_list(int k) {
  static const Scalar v[] = {Scalar::fraction(1, 10), Scalar::fraction(1, 2), Scalar(1)};
  return v[k];
}

}  // namespace

TEST(Pipeline, SecondOrderBlocksMatchOracle) {
  for (unsigned n = 1; n <= 4; ++n) {
    for (int e = 0; e < 3; ++e) {
      for (YPolicy y : {YPolicy::no_click, YPolicy::trace_out}) {
        for (CascadeTopology t : {CascadeTopology::balanced, CascadeTopology::chain}) {
          const ExperimentConfig c = make_config(n, eta_list(e), y, t, 2);
          const OrderedDensity rho = build_output_state(c);
          const oracle::Setup s = oracle_setup(c);
          for (auto [i, j] : {std::pair{2, 0}, std::pair{1, 1}}) {
            const DensityOperator* block = rho.block(i, j);
            ASSERT_NE(block, nullptr);
            expect_block_matches(*block, oracle::block(s, i, j),
                                 "n=" + std::to_string(n) + " eta=" + eta_list(e).str() +
                                     " block " + std::to_string(i) + std::to_string(j));
          }
        }
      }
    }
  }
}

TEST(Pipeline, ThirdOrderBlocksMatchOracle) {
  for (int e = 0; e < 2; ++e) {
    for (YPolicy y : {YPolicy::no_click, YPolicy::trace_out}) {
      const ExperimentConfig c = make_config(1, eta_list(e), y, CascadeTopology::balanced, 3);
      const OrderedDensity rho = build_output_state(c);
      const oracle::Setup s = oracle_setup(c);
      for (auto [i, j] : {std::pair{3, 0}, std::pair{2, 1}, std::pair{1, 2}}) {
        const DensityOperator* block = rho.block(i, j);
        ASSERT_NE(block, nullptr);
        expect_block_matches(*block, oracle::block(s, i, j),
                             "block " + std::to_string(i) + std::to_string(j));
      }
    }
  }
}

TEST(Pipeline, BlockKeys) {
  const auto two = build_output_state(make_config(1, Scalar::fraction(1, 2), YPolicy::no_click,
                                                  CascadeTopology::balanced, 2));
  std::vector<std::string> keys;
  for (const auto& [k, _] : two.blocks()) keys.push_back(k.str());
  EXPECT_EQ(keys, (std::vector<std::string>{"(1,1)", "(2,0)"}));
  EXPECT_EQ(two.block(0, 2), nullptr);

  const auto three = build_output_state(make_config(1, Scalar::fraction(1, 2), YPolicy::trace_out,
                                                    CascadeTopology::balanced, 3));
  keys.clear();
  for (const auto& [k, _] : three.blocks()) keys.push_back(k.str());
  EXPECT_EQ(keys, (std::vector<std::string>{"(1,1)", "(1,2)", "(2,0)", "(2,1)", "(3,0)"}));
}

TEST(Pipeline, VacuumSignalRatioMatchesRoutingOracle) {
  // Vacuum / signal = (p1/p2) [C2(n) + eta^2 (1 - eta^2)] / eta^2 with C2 the
  // two-photon "exactly one click" probability of the cascade.
  const Scalar p1 = Scalar::fraction(1, 100), p2 = Scalar::fraction(1, 200);
  for (unsigned n = 1; n <= 4; ++n) {
    for (int e = 0; e < 3; ++e) {
      const Scalar eta = eta_list(e);
      const ExperimentConfig c = make_config(n, eta, YPolicy::no_click, CascadeTopology::balanced, 2);
      const IdealState ideal = IdealState::make(c.theta);
      const Scalar ratio = vacuum_signal_ratio(build_output_state(c).combined(p1, p2), ideal);
      const double x = eta.to_double();
      const double c2 = oracle::exactly_one_click_multinomial(2, oracle::balanced_routes(static_cast<int>(n)), x);
      const double want = (p1 / p2).to_double() * (c2 + x * (1 - x)) / x;
      EXPECT_NEAR(ratio.to_double(), want, 1e-12 * want) << n << " " << eta;
    }
  }
}

TEST(Pipeline, InnsbruckFidelityFromOracle) {
  const Scalar eta = Scalar::fraction(1, 10);
  ExperimentConfig c = make_config(1, eta, YPolicy::trace_out, CascadeTopology::balanced, 2);
  const InnsbruckResult res = innsbruck_variant(c);
  const oracle::Setup s = oracle_setup(c);
  const auto b11 = oracle::block(s, 1, 1), b20 = oracle::block(s, 2, 0);
  const double signal = oracle::signal(b11, 0.6, 0.8);
  const double fid = signal / (oracle::trace(b11) + oracle::trace(b20));
  EXPECT_NEAR(res.fidelity.to_double(), fid, 1e-14);
  EXPECT_TRUE(res.fidelity.is_exact());
  EXPECT_EQ(res.fidelity, Scalar::fraction(10, 39));
  EXPECT_EQ(res.vacuum_signal_ratio, 3 - eta);

  c.p2 = Scalar::fraction(1, 50);
  EXPECT_THROW(innsbruck_variant(c), ConfigError);
}

TEST(Pipeline, PerfectSingleDetectorGivesHalf) {
  const ExperimentConfig c = make_config(1, 1, YPolicy::no_click, CascadeTopology::balanced, 2);
  const IdealState ideal = IdealState::make(c.theta);
  EXPECT_EQ(fidelity(build_output_state(c), c.p1, c.p2, ideal), Scalar::fraction(1, 2));
}

TEST(Pipeline, FullStateAgreesWithBlockSum) {
  // Propagating the truncated source superposition with r^2 = 1/50 and
  // collecting the diagonal-in-photon-number part reproduces
  // sum p1^i p2^j block(i, j) with p = 2 r^2.
  const ExperimentConfig c = make_config(2, Scalar::fraction(1, 2), YPolicy::no_click,
                                         CascadeTopology::balanced, 2);
  const OrderedDensity rho = build_output_state(c);
  const Scalar p = Scalar::fraction(1, 25);
  const DensityOperator combined = rho.combined(p, p);
  const oracle::Setup s = oracle_setup(c);
  const double w = p.to_double();
  oracle::Density full;
  for (auto [i, j] : {std::pair{1, 1}, std::pair{2, 0}}) {
    for (const auto& [key, v] : oracle::block(s, i, j)) full[key] += std::pow(w, i + j) * v;
  }
  for (unsigned a = 0; a <= 2; ++a) {
    for (unsigned b = 0; a + b <= 2; ++b) {
      const auto it = full.find({mono(a, b), mono(a, b)});
      const double want = it == full.end() ? 0.0 : it->second;
      EXPECT_NEAR(combined.physical_entry(bob(a, b), bob(a, b)).to_double(), want, 1e-15);
    }
  }
}

TEST(Pipeline, NoCrossTermsBetweenOrders) {
  for (unsigned order : {2u, 3u}) {
    const auto rho = build_output_state(make_config(1, Scalar::fraction(1, 2), YPolicy::trace_out,
                                                    CascadeTopology::balanced, order));
    EXPECT_TRUE(cross_term_check(rho));
  }
}

TEST(Pipeline, SignalIndependentOfTheta) {
  const Scalar p = Scalar::fraction(1, 100);
  Scalar reference;
  bool first = true;
  for (Angle theta : {Angle{1, 0}, Angle{Scalar::fraction(3, 5), Scalar::fraction(4, 5)},
                      Angle{Scalar::fraction(-5, 13), Scalar::fraction(12, 13)}}) {
    ExperimentConfig c = make_config(2, Scalar::fraction(1, 2), YPolicy::no_click,
                                     CascadeTopology::balanced, 2);
    c.theta = theta;
    const Scalar f = fidelity(build_output_state(c), p, p, IdealState::make(theta));
    if (first) reference = f;
    first = false;
    EXPECT_EQ(f, reference);
  }
}

TEST(Pipeline, FloatingModeAgreesWithExact) {
  ExperimentConfig exact = make_config(2, Scalar::fraction(1, 2), YPolicy::no_click,
                                       CascadeTopology::balanced, 2);
  ExperimentConfig flt = exact;
  flt.eta_u_sq = Scalar::floating(0.5);
  EXPECT_EQ(flt.mode(), ScalarMode::floating);
  const IdealState ideal = IdealState::make(exact.theta);
  const Scalar fe = fidelity(build_output_state(exact), exact.p1, exact.p2, ideal);
  const Scalar ff = fidelity(build_output_state(flt), flt.p1, flt.p2, ideal);
  EXPECT_NEAR(fe.to_double(), ff.to_double(), 1e-13);
}

TEST(Config, ValidationErrors) {
  ExperimentConfig c;
  c.truncation_order = 4;
  EXPECT_THROW(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.p1 = Scalar(1);
  EXPECT_THROW(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.eta_u_sq = Scalar::fraction(3, 2);
  EXPECT_THROW(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.theta = {Scalar::fraction(1, 2), Scalar::fraction(1, 2)};
  EXPECT_THROW(c.validate(), ConfigError);
  c = ExperimentConfig{};
  c.cascade.n_detectors = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(ClosedForms, SecondOrderFormulaAndThreshold) {
  const Scalar p = Scalar::fraction(1, 100);
  // At the threshold efficiency the printed fidelity is exactly 3/4.
  for (unsigned n = 1; n <= 8; ++n) {
    const Scalar eta = f2_threshold(n, p, p);
    EXPECT_EQ(f2_formula(n, p, p, eta), Scalar::fraction(3, 4)) << n;
  }
  EXPECT_EQ(f2_threshold(4, p, p), Scalar::fraction(50, 51));
  EXPECT_EQ(f2_threshold_limit(p, p), Scalar::fraction(14, 15));
}

TEST(ClosedForms, PumpEconomics) {
  const Scalar p1 = Scalar::fraction(1, 100);
  EXPECT_EQ(required_p2(p1, Scalar::fraction(1, 10)), Scalar::fraction(87, 1000));
  EXPECT_EQ(pump_ratio(Scalar(2)), Scalar::sqrt2_inject(1));
  EXPECT_NEAR(pump_ratio(Scalar::fraction(87, 10)).to_double(), std::sqrt(8.7), 1e-12);
}

TEST(ClosedForms, ThirdOrderLimit) {
  EXPECT_EQ(f3_formula(0, Scalar::fraction(1, 10)), Scalar::fraction(10, 39));
  // Single detector, equal pumps: F = 1 / (2 + 2 (1 - eta^2)).
  const Scalar high = Scalar(1) / Scalar::fraction(21, 10), low = Scalar(1) / Scalar::fraction(38, 10);
  EXPECT_EQ(efficiency_sensitivity(Scalar::fraction(1, 10), Scalar::fraction(95, 100)),
            (high - low) / high);
}

TEST(Reference, PartitionDemoAgrees) {
  const IdealState ideal = IdealState::make({Scalar::fraction(3, 5), Scalar::fraction(4, 5)});
  const PartitionDemo d = partition_demo(Scalar::fraction(1, 3), Scalar::fraction(2, 3), ideal);
  EXPECT_TRUE(d.equal);
  EXPECT_TRUE(d.coherence.is_zero());
  EXPECT_EQ(d.mixture, d.partition);
}

TEST(Reference, Rho1AndRho2) {
  const DensityOperator r1 = rho1();
  EXPECT_EQ(dm_trace(r1), Scalar(1));
  const DensityOperator r2 = rho2({Scalar::fraction(3, 5), Scalar::fraction(4, 5)});
  EXPECT_TRUE(r2.is_hermitian());
}
