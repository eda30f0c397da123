#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qtele/optics.hpp"

namespace qtele {

class DetectionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Measurement element diagonal in the occupation basis of `modes`.
class DiagonalPovm {
 public:
  using Coefficient = std::function<Scalar(std::span<const unsigned>)>;

  DiagonalPovm(std::vector<ModeId> modes, Coefficient coefficient, std::string label = {});

  const std::vector<ModeId>& modes() const { return modes_; }
  const std::string& label() const { return label_; }

  Scalar coefficient(std::span<const unsigned> occupations) const;
  Scalar coefficient(const BasisKet& k) const;

 private:
  std::vector<ModeId> modes_;
  Coefficient coefficient_;
  std::string label_;
};

/// (1 - eta^2)^n
DiagonalPovm povm_no_click(const ModeId& mode, const Scalar& eta_sq);
/// 1 - (1 - eta^2)^n
DiagonalPovm povm_click(const ModeId& mode, const Scalar& eta_sq);
/// 1 - (1 - eta^2)^{n+m} for a polarization-insensitive detector.
DiagonalPovm povm_click_unpolarized(const ModeId& mode_x, const ModeId& mode_y,
                                    const Scalar& eta_sq);
/// Exactly one of the given identical detectors clicks:
/// sum_i click(n_i) prod_{j != i} no_click(n_j).
DiagonalPovm povm_exactly_one_click(std::vector<ModeId> detectors, const Scalar& eta_sq);

enum class YPolicy { no_click, trace_out };

/// Shape of the 50:50 splitting tree feeding the x-branch detectors.
enum class CascadeTopology {
  balanced,  // split halves recursively, larger half on the left
  chain,     // each splitter sends one output to a detector, the other onward
};

struct CascadeSpec {
  unsigned n_detectors = 1;
  Scalar eta_c_sq = 1;
  YPolicy y_policy = YPolicy::no_click;
  CascadeTopology topology = CascadeTopology::balanced;

  void validate() const;
};

/// n - 1 balanced splitters distributing `input` over n detector leaves.
struct CascadeTree {
  std::vector<BeamSplitterSpec> splitters;  // in application order
  std::vector<ModeId> leaves;
};

CascadeTree build_cascade_tree(const ModeId& input, unsigned n_detectors,
                               CascadeTopology topology = CascadeTopology::balanced,
                               ScalarMode mode = ScalarMode::exact);

Ket apply_cascade_tree(const Ket& ket, const CascadeTree& tree);

/// Diagonal coefficient on |photons> of the "exactly one cascade detector
/// clicks" event, computed by sending the Fock state through the tree.
Scalar cascade_effective_coefficient(unsigned n_detectors, unsigned photons,
                                     const Scalar& eta_c_sq,
                                     CascadeTopology topology = CascadeTopology::balanced);

/// Tr_traced[ (prod E) |left><right| ] on the remaining modes.
///
/// POVM modes must lie in `traced` and be pairwise disjoint. Traced modes
/// without a POVM are traced with the identity. `kept` declares the mode set
/// of the result and defaults to the occupied, untraced modes.
DensityOperator apply_measurement(const Ket& left, const Ket& right,
                                  std::span<const DiagonalPovm> povms, const ModeSet& traced,
                                  const std::optional<ModeSet>& kept = std::nullopt);
DensityOperator apply_measurement(const Ket& state, std::span<const DiagonalPovm> povms,
                                  const ModeSet& traced,
                                  const std::optional<ModeSet>& kept = std::nullopt);

}  // namespace qtele
