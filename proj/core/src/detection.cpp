#include "qtele/detection.hpp"

#include <algorithm>
#include <cmath>

namespace qtele {

namespace {

void require_efficiency(const Scalar& eta_sq) {
  if (eta_sq.sign() < 0 || eta_sq > Scalar(1) ||
      (!eta_sq.is_exact() && eta_sq.to_double() > 1.0)) {
    throw DetectionError("detector efficiency must lie in [0, 1], got " + eta_sq.str());
  }
}

Scalar one_like(const Scalar& s) { return s.is_exact() ? Scalar(1) : Scalar::floating(1.0); }

}  // namespace

DiagonalPovm::DiagonalPovm(std::vector<ModeId> modes, Coefficient coefficient, std::string label)
    : modes_(std::move(modes)), coefficient_(std::move(coefficient)), label_(std::move(label)) {
  ModeSet seen;
  for (const auto& m : modes_) {
    if (!seen.insert(m).second) throw DetectionError("POVM lists mode '" + m.name() + "' twice");
  }
}

Scalar DiagonalPovm::coefficient(std::span<const unsigned> occupations) const {
  if (occupations.size() != modes_.size()) throw DetectionError("POVM occupation arity mismatch");
  return coefficient_(occupations);
}

Scalar DiagonalPovm::coefficient(const BasisKet& k) const {
  const auto occ = k.occupations(modes_);
  return coefficient_(occ);
}

DiagonalPovm povm_no_click(const ModeId& mode, const Scalar& eta_sq) {
  require_efficiency(eta_sq);
  const Scalar loss = one_like(eta_sq) - eta_sq;
  return DiagonalPovm({mode}, [loss](std::span<const unsigned> n) { return loss.pow(n[0]); },
                      "no_click(" + mode.name() + ")");
}

DiagonalPovm povm_click(const ModeId& mode, const Scalar& eta_sq) {
  require_efficiency(eta_sq);
  const Scalar one = one_like(eta_sq);
  const Scalar loss = one - eta_sq;
  return DiagonalPovm(
      {mode}, [one, loss](std::span<const unsigned> n) { return one - loss.pow(n[0]); },
      "click(" + mode.name() + ")");
}

DiagonalPovm povm_click_unpolarized(const ModeId& mode_x, const ModeId& mode_y,
                                    const Scalar& eta_sq) {
  require_efficiency(eta_sq);
  const Scalar one = one_like(eta_sq);
  const Scalar loss = one - eta_sq;
  return DiagonalPovm(
      {mode_x, mode_y},
      [one, loss](std::span<const unsigned> n) { return one - loss.pow(n[0] + n[1]); },
      "click(" + mode_x.name() + "+" + mode_y.name() + ")");
}

DiagonalPovm povm_exactly_one_click(std::vector<ModeId> detectors, const Scalar& eta_sq) {
  require_efficiency(eta_sq);
  if (detectors.empty()) throw DetectionError("exactly-one-click needs at least one detector");
  const Scalar one = one_like(eta_sq);
  const Scalar loss = one - eta_sq;
  std::string label = "exactly_one_click(" + std::to_string(detectors.size()) + ")";
  return DiagonalPovm(
      std::move(detectors),
      [one, loss](std::span<const unsigned> n) {
        Scalar total = 0;
        for (std::size_t i = 0; i < n.size(); ++i) {
          Scalar term = one - loss.pow(n[i]);
          for (std::size_t j = 0; j < n.size() && !term.is_zero(); ++j) {
            if (j != i) term *= loss.pow(n[j]);
          }
          total += term;
        }
        return total;
      },
      std::move(label));
}

void CascadeSpec::validate() const {
  if (n_detectors < 1) throw DetectionError("cascade needs at least one detector");
  require_efficiency(eta_c_sq);
}

namespace {

void grow_balanced(const ModeId& mode, unsigned n, ScalarMode smode, CascadeTree& tree) {
  if (n == 1) {
    tree.leaves.push_back(mode);
    return;
  }
  const ModeId vac(mode.name() + "~v");
  const ModeId left(mode.name() + ".0");
  const ModeId right(mode.name() + ".1");
  tree.splitters.push_back(BeamSplitterSpec::balanced(mode, vac, left, right, smode));
  grow_balanced(left, n - n / 2, smode, tree);
  grow_balanced(right, n / 2, smode, tree);
}

}  // namespace

CascadeTree build_cascade_tree(const ModeId& input, unsigned n_detectors,
                               CascadeTopology topology, ScalarMode mode) {
  if (n_detectors < 1) throw DetectionError("cascade needs at least one detector");
  CascadeTree tree;
  if (topology == CascadeTopology::balanced) {
    grow_balanced(input, n_detectors, mode, tree);
    return tree;
  }
  ModeId current = input;
  for (unsigned i = 1; i < n_detectors; ++i) {
    const ModeId vac(current.name() + "~v");
    const ModeId leaf(current.name() + ".0");
    const ModeId onward(current.name() + ".1");
    tree.splitters.push_back(BeamSplitterSpec::balanced(current, vac, leaf, onward, mode));
    tree.leaves.push_back(leaf);
    current = onward;
  }
  tree.leaves.push_back(current);
  return tree;
}

Ket apply_cascade_tree(const Ket& ket, const CascadeTree& tree) {
  Ket out = ket;
  for (const auto& bs : tree.splitters) out = beam_splitter(out, bs);
  return out;
}

Scalar cascade_effective_coefficient(unsigned n_detectors, unsigned photons,
                                     const Scalar& eta_c_sq, CascadeTopology topology) {
  require_efficiency(eta_c_sq);
  const ModeId input("cascade_in");
  const ScalarMode smode = eta_c_sq.is_exact() ? ScalarMode::exact : ScalarMode::floating;
  const CascadeTree tree = build_cascade_tree(input, n_detectors, topology, smode);

  const Ket fock = Ket::basis(BasisKet::of({{input, photons}}));
  const Ket spread = apply_cascade_tree(fock, tree);
  const std::vector<DiagonalPovm> povms{povm_exactly_one_click(tree.leaves, eta_c_sq)};
  const ModeSet traced(tree.leaves.begin(), tree.leaves.end());
  const DensityOperator rho = apply_measurement(spread, povms, traced, ModeSet{});
  // rho is the scalar <e_k| U^dag E U |e_k>; divide by the metric 1/k!
  return dm_trace(rho) * factorial(photons);
}

DensityOperator apply_measurement(const Ket& left, const Ket& right,
                                  std::span<const DiagonalPovm> povms, const ModeSet& traced,
                                  const std::optional<ModeSet>& kept) {
  if (left.convention() != Convention::divided_power ||
      right.convention() != Convention::divided_power) {
    throw DetectionError("measurement acts on divided-power kets");
  }
  ModeSet covered;
  for (const auto& povm : povms) {
    for (const auto& m : povm.modes()) {
      if (!traced.contains(m)) {
        throw DetectionError("POVM on mode '" + m.name() + "' which is not traced");
      }
      if (!covered.insert(m).second) {
        throw DetectionError("POVMs overlap on mode '" + m.name() + "'");
      }
    }
  }

  ModeSet result_modes;
  if (kept) {
    result_modes = *kept;
  } else {
    const ModeSet occ = left.occupied_modes();
    const ModeSet occ_r = right.occupied_modes();
    for (const auto* s : {&occ, &occ_r}) {
      for (const auto& m : *s) {
        if (!traced.contains(m)) result_modes.insert(m);
      }
    }
  }
  DensityOperator rho(result_modes);

  struct Piece {
    BasisKet rest;
    const Scalar* coefficient;
  };
  std::map<BasisKet, std::vector<Piece>> right_by_traced;
  for (const auto& [k, c] : right.terms()) {
    auto [t, rest] = k.split(traced);
    right_by_traced[t].push_back({std::move(rest), &c});
  }

  std::map<BasisKet, Scalar> weight_cache;
  for (const auto& [k, c] : left.terms()) {
    auto [t, rest] = k.split(traced);
    auto group = right_by_traced.find(t);
    if (group == right_by_traced.end()) continue;
    auto w = weight_cache.find(t);
    if (w == weight_cache.end()) {
      Scalar weight = t.metric_weight();
      for (const auto& povm : povms) {
        if (weight.is_zero()) break;
        weight *= povm.coefficient(t);
      }
      w = weight_cache.emplace(t, std::move(weight)).first;
    }
    if (w->second.is_zero()) continue;
    const Scalar lw = c * w->second;
    for (const auto& piece : group->second) rho.add(rest, piece.rest, lw * *piece.coefficient);
  }
  return rho;
}

DensityOperator apply_measurement(const Ket& state, std::span<const DiagonalPovm> povms,
                                  const ModeSet& traced, const std::optional<ModeSet>& kept) {
  return apply_measurement(state, state, povms, traced, kept);
}

}  // namespace qtele
