#pragma once

#include <span>
#include <vector>

#include "qtele/fock.hpp"

namespace qtele {

class OpticsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Orthogonal x/y polarization pair of one spatial mode.
struct ModePair {
  ModeId x;
  ModeId y;
};

/// Standard labels used throughout the experiment.
namespace modes {
ModePair pair(const std::string& spatial);  // {"<s>_x", "<s>_y"}
}  // namespace modes

/// One term a^dag -> amplitude * out^dag of a linear creation-operator map.
struct ModeImage {
  ModeId output;
  Scalar amplitude;
};

struct CreationMap {
  ModeId input;
  std::vector<ModeImage> images;
};

/// Substitutes every listed input creation operator by its image and
/// re-expands each basis term. Output labels must not already be occupied by
/// modes outside the input set. Divided-power kets only.
Ket linear_transform(const Ket& ket, std::span<const CreationMap> maps);

/// c = eta a + eta~ b,  d = eta~ a - eta b.
struct BeamSplitterSpec {
  ModeId in_a;
  ModeId in_b;
  ModeId out_c;
  ModeId out_d;
  Scalar eta;
  Scalar eta_tilde;

  static BeamSplitterSpec balanced(ModeId in_a, ModeId in_b, ModeId out_c, ModeId out_d,
                                   ScalarMode mode = ScalarMode::exact);
  void validate() const;
};

Ket beam_splitter(const Ket& ket, const BeamSplitterSpec& spec);

/// a_x^dag -> cos a_x^dag + sin a_y^dag,  a_y^dag -> -sin a_x^dag + cos a_y^dag.
struct PolarizationRotation {
  ModePair modes;
  Scalar cos_theta;
  Scalar sin_theta;

  void validate() const;
  PolarizationRotation inverse() const { return {modes, cos_theta, -sin_theta}; }
};

Ket polarization_rotation(const Ket& ket, const PolarizationRotation& rot);

/// L+ = a_x^dag b_y^dag - a_y^dag b_x^dag
Ket l_plus(const Ket& ket, const ModePair& a, const ModePair& b);
/// L- = a_x b_y - a_y b_x
Ket l_minus(const Ket& ket, const ModePair& a, const ModePair& b);
/// L0 = (N_a + N_b + 2) / 2
Ket l_zero(const Ket& ket, const ModePair& a, const ModePair& b);

/// A state N * |v> carried as the unnormalized vector plus N^2, since the
/// pair-state normalizations 1/sqrt(n!(n+1)!) leave Q(sqrt 2) for n >= 2.
struct ScaledKet {
  Ket vector;
  Scalar scale_sq;

  /// |<this|other>|^2
  Scalar squared_overlap(const Ket& other) const;
  Scalar squared_overlap(const ScaledKet& other) const;
  Scalar squared_norm() const;
};

/// n entangled pairs: N_n L+^n |0>, N_n^2 = 1/(n!(n+1)!).
ScaledKet phi_n(unsigned n, const ModePair& a, const ModePair& b, unsigned photon_cap);

}  // namespace qtele
