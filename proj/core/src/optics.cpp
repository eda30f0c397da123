#include "qtele/optics.hpp"

#include <cmath>

namespace qtele {

namespace modes {
ModePair pair(const std::string& spatial) {
  return {ModeId(spatial + "_x"), ModeId(spatial + "_y")};
}
}  // namespace modes

namespace {

using Partial = std::map<BasisKet, Scalar>;

Scalar binomial(unsigned n, unsigned k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return Scalar::rational(mpq_class(b));
}

/// Multiplies e_k(mode) into every partial term: e_m e_k = C(m+k, k) e_{m+k}.
void multiply_in(Partial& partial, const ModeId& mode, unsigned k, const Scalar& factor) {
  Partial next;
  for (auto& [basis, c] : partial) {
    const unsigned m = basis.occupation(mode);
    Scalar coefficient = c * factor;
    if (m != 0 && k != 0) coefficient *= binomial(m + k, k);
    auto [it, inserted] = next.try_emplace(basis.with(mode, m + k), coefficient);
    if (!inserted) it->second += coefficient;
  }
  partial = std::move(next);
}

/// e_n(input) -> sum over compositions k of n: prod_j amp_j^{k_j} e_{k_j}(out_j)
void expand_input(const Partial& seed, const std::vector<ModeImage>& images, unsigned n,
                  Partial& result) {
  struct Frame {
    std::size_t index;
    unsigned remaining;
    Partial partial;
  };
  std::vector<Frame> stack;
  stack.push_back({0, n, seed});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.index + 1 == images.size()) {
      const auto& img = images[f.index];
      if (f.remaining != 0 && img.amplitude.is_zero()) continue;
      multiply_in(f.partial, img.output, f.remaining, img.amplitude.pow(f.remaining));
      for (auto& [b, c] : f.partial) {
        auto [it, inserted] = result.try_emplace(b, c);
        if (!inserted) it->second += c;
      }
      continue;
    }
    const auto& img = images[f.index];
    for (unsigned k = 0; k <= f.remaining; ++k) {
      if (k != 0 && img.amplitude.is_zero()) break;
      Frame next{f.index + 1, f.remaining - k, f.partial};
      multiply_in(next.partial, img.output, k, img.amplitude.pow(k));
      stack.push_back(std::move(next));
    }
  }
}

}  // namespace

Ket linear_transform(const Ket& ket, std::span<const CreationMap> maps) {
  if (ket.convention() != Convention::divided_power) {
    throw OpticsError("linear optics acts on divided-power kets");
  }
  ModeSet inputs;
  ModeSet outputs;
  for (const auto& m : maps) {
    if (m.images.empty()) throw OpticsError("mode map for '" + m.input.name() + "' has no image");
    if (!inputs.insert(m.input).second) throw OpticsError("duplicate input '" + m.input.name() + "'");
    for (const auto& img : m.images) outputs.insert(img.output);
  }

  Ket out(Convention::divided_power);
  out.set_photon_cap(ket.photon_cap());
  for (const auto& [basis, c] : ket.terms()) {
    auto [in_part, rest] = basis.split(inputs);
    for (const auto& e : rest.entries()) {
      if (outputs.contains(e.first)) {
        throw OpticsError("output mode '" + e.first.name() + "' is already occupied");
      }
    }
    Partial partial{{rest, c}};
    for (const auto& m : maps) {
      const unsigned n = in_part.occupation(m.input);
      if (n == 0) continue;
      Partial expanded;
      expand_input(partial, m.images, n, expanded);
      partial = std::move(expanded);
    }
    for (const auto& [b, v] : partial) out.add(b, v);
  }
  return out;
}

BeamSplitterSpec BeamSplitterSpec::balanced(ModeId in_a, ModeId in_b, ModeId out_c, ModeId out_d,
                                            ScalarMode mode) {
  const Scalar h = Scalar::inv_sqrt2(mode);
  return {std::move(in_a), std::move(in_b), std::move(out_c), std::move(out_d), h, h};
}

namespace {
bool is_unit(const Scalar& sum) {
  if (sum.is_exact()) return sum == Scalar(1);
  return std::fabs(sum.to_double() - 1.0) <= 1e-12;
}
}  // namespace

void BeamSplitterSpec::validate() const {
  if (!is_unit(eta * eta + eta_tilde * eta_tilde)) {
    throw OpticsError("beam splitter requires eta^2 + eta~^2 = 1");
  }
  if (in_a == in_b || out_c == out_d) throw OpticsError("beam splitter ports must be distinct");
}

Ket beam_splitter(const Ket& ket, const BeamSplitterSpec& spec) {
  spec.validate();
  // The mode matrix is symmetric orthogonal, so the creation operators map
  // through the same coefficients: a^dag -> eta c^dag + eta~ d^dag.
  const std::vector<CreationMap> maps{
      {spec.in_a, {{spec.out_c, spec.eta}, {spec.out_d, spec.eta_tilde}}},
      {spec.in_b, {{spec.out_c, spec.eta_tilde}, {spec.out_d, -spec.eta}}},
  };
  return linear_transform(ket, maps);
}

void PolarizationRotation::validate() const {
  if (!is_unit(cos_theta * cos_theta + sin_theta * sin_theta)) {
    throw OpticsError("polarization rotation requires cos^2 + sin^2 = 1");
  }
}

Ket polarization_rotation(const Ket& ket, const PolarizationRotation& rot) {
  rot.validate();
  const std::vector<CreationMap> maps{
      {rot.modes.x, {{rot.modes.x, rot.cos_theta}, {rot.modes.y, rot.sin_theta}}},
      {rot.modes.y, {{rot.modes.x, -rot.sin_theta}, {rot.modes.y, rot.cos_theta}}},
  };
  return linear_transform(ket, maps);
}

Ket l_plus(const Ket& ket, const ModePair& a, const ModePair& b) {
  return apply_creation(apply_creation(ket, b.y), a.x) -
         apply_creation(apply_creation(ket, b.x), a.y);
}

Ket l_minus(const Ket& ket, const ModePair& a, const ModePair& b) {
  return apply_annihilation(apply_annihilation(ket, b.y), a.x) -
         apply_annihilation(apply_annihilation(ket, b.x), a.y);
}

Ket l_zero(const Ket& ket, const ModePair& a, const ModePair& b) {
  Ket n = apply_number(ket, a.x) + apply_number(ket, a.y) + apply_number(ket, b.x) +
          apply_number(ket, b.y);
  n += ket * Scalar(2);
  return n * Scalar::fraction(1, 2);
}

Scalar ScaledKet::squared_overlap(const Ket& other) const {
  const Scalar ip = inner_product(vector, other);
  return scale_sq * ip * ip;
}

Scalar ScaledKet::squared_overlap(const ScaledKet& other) const {
  const Scalar ip = inner_product(vector, other.vector);
  return scale_sq * other.scale_sq * ip * ip;
}

Scalar ScaledKet::squared_norm() const { return scale_sq * qtele::squared_norm(vector); }

ScaledKet phi_n(unsigned n, const ModePair& a, const ModePair& b, unsigned photon_cap) {
  if (2 * n > photon_cap) {
    throw std::logic_error(std::to_string(n) + " pairs exceed photon cap " +
                           std::to_string(photon_cap));
  }
  Ket v = Ket::vacuum();
  v.set_photon_cap(photon_cap);
  for (unsigned i = 0; i < n; ++i) v = l_plus(v, a, b);
  return {std::move(v), (factorial(n) * factorial(n + 1)).inverse()};
}

}  // namespace qtele
