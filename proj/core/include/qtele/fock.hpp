#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qtele/scalar.hpp"

namespace qtele {

class FockError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Label of one bosonic mode, e.g. "a_x", "u_y" or a generated cascade leaf.
class ModeId {
 public:
  ModeId() = default;
  explicit ModeId(std::string name) : name_(std::move(name)) {}
  ModeId(const char* name) : name_(name) {}  // NOLINT(google-explicit-constructor)

  const std::string& name() const { return name_; }

  friend auto operator<=>(const ModeId&, const ModeId&) = default;
  friend bool operator==(const ModeId&, const ModeId&) = default;

 private:
  std::string name_;
};

using ModeSet = std::set<ModeId>;

/// Occupation-number assignment; absent modes are empty.
///
/// Stored as a vector sorted by mode label without zero entries, so equal
/// kets compare equal and iteration order is deterministic.
class BasisKet {
 public:
  using Entry = std::pair<ModeId, unsigned>;

  BasisKet() = default;
  static BasisKet vacuum() { return {}; }
  static BasisKet of(std::initializer_list<Entry> occupations);

  unsigned occupation(const ModeId& mode) const;
  unsigned total_photons() const;
  bool is_vacuum() const { return entries_.empty(); }

  BasisKet with(const ModeId& mode, unsigned count) const;

  /// Part of the ket on `modes` and the part on everything else.
  std::pair<BasisKet, BasisKet> split(const ModeSet& modes) const;
  BasisKet restricted(const ModeSet& modes) const { return split(modes).first; }
  /// Occupation tuple for an ordered list of modes.
  std::vector<unsigned> occupations(std::span<const ModeId> modes) const;

  /// Product of the two occupation assignments on disjoint modes
  /// (occupations add where labels coincide).
  BasisKet merged(const BasisKet& other) const;

  /// prod_m 1/n_m!, the squared norm of this divided-power basis vector.
  Scalar metric_weight() const;

  const std::vector<Entry>& entries() const { return entries_; }
  std::string str() const;

  friend auto operator<=>(const BasisKet&, const BasisKet&) = default;
  friend bool operator==(const BasisKet&, const BasisKet&) = default;

 private:
  std::vector<Entry> entries_;
};

/// Basis used for Ket coefficients.
///
/// divided_power: e_n = (a^dag)^n |0> / n!, so a^dag e_n = (n+1) e_{n+1},
/// a e_n = e_{n-1}, and <e_n, e_m> = delta_nm / n!. Every optical coefficient
/// stays in Q(sqrt 2). normalized: ordinary Fock states |n>, floating only.
enum class Convention { divided_power, normalized };

/// Sparse superposition of basis kets. Zero coefficients are never stored.
class Ket {
 public:
  using Terms = std::map<BasisKet, Scalar>;

  explicit Ket(Convention convention = Convention::divided_power) : convention_(convention) {}

  static Ket vacuum(Convention convention = Convention::divided_power);
  static Ket basis(const BasisKet& k, const Scalar& coefficient = 1,
                   Convention convention = Convention::divided_power);

  Convention convention() const { return convention_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  Scalar coefficient(const BasisKet& k) const;
  unsigned max_photons() const;
  /// Every mode with nonzero occupation in some term.
  ModeSet occupied_modes() const;

  /// Optional hard limit on photons per term; exceeding it is a logic error.
  std::optional<unsigned> photon_cap() const { return photon_cap_; }
  Ket& set_photon_cap(std::optional<unsigned> cap);

  void add(const BasisKet& k, const Scalar& coefficient);

  Ket& operator+=(const Ket& rhs);
  Ket& operator-=(const Ket& rhs);
  Ket& operator*=(const Scalar& factor);
  friend Ket operator+(Ket lhs, const Ket& rhs) { return lhs += rhs; }
  friend Ket operator-(Ket lhs, const Ket& rhs) { return lhs -= rhs; }
  friend Ket operator*(Ket lhs, const Scalar& f) { return lhs *= f; }
  friend Ket operator*(const Scalar& f, Ket rhs) { return rhs *= f; }

  friend bool operator==(const Ket& lhs, const Ket& rhs);

  std::string str() const;

 private:
  void check_cap(const BasisKet& k) const;

  Terms terms_;
  Convention convention_;
  std::optional<unsigned> photon_cap_;
};

Ket apply_creation(const Ket& ket, const ModeId& mode);
Ket apply_annihilation(const Ket& ket, const ModeId& mode);
/// Number operator a^dag a on one mode.
Ket apply_number(const Ket& ket, const ModeId& mode);

/// Physical overlap <k1|k2>; uses the 1/n! metric in the divided-power basis.
Scalar inner_product(const Ket& k1, const Ket& k2);
Scalar squared_norm(const Ket& ket);

/// Re-expresses a divided-power ket in the normalized Fock basis (floating).
Ket to_normalized(const Ket& ket);

/// Sparse real symmetric operator sum rho_kl |e_k><e_l| over divided-power
/// basis vectors, acting on a declared set of modes.
class DensityOperator {
 public:
  enum class Normalization { unnormalized_conditional, trace_one };
  using Key = std::pair<BasisKet, BasisKet>;
  using Entries = std::map<Key, Scalar>;

  DensityOperator() = default;
  explicit DensityOperator(ModeSet modes,
                           Normalization normalization = Normalization::unnormalized_conditional)
      : modes_(std::move(modes)), normalization_(normalization) {}

  const ModeSet& modes() const { return modes_; }
  Normalization normalization() const { return normalization_; }
  void set_normalization(Normalization n) { normalization_ = n; }

  const Entries& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  Scalar entry(const BasisKet& ket, const BasisKet& bra) const;
  void add(const BasisKet& ket, const BasisKet& bra, const Scalar& value);

  /// Entry in the normalized Fock basis: rho_kl / sqrt(k! l!).
  Scalar physical_entry(const BasisKet& ket, const BasisKet& bra) const;
  /// Adds a normalized-basis matrix element (inverse of physical_entry).
  void add_physical(const BasisKet& ket, const BasisKet& bra, const Scalar& value);

  /// <psi| rho |psi>
  Scalar expectation(const Ket& psi) const;

  bool is_hermitian() const;
  bool has_nonnegative_diagonal() const;

  DensityOperator& operator+=(const DensityOperator& rhs);
  DensityOperator& operator*=(const Scalar& factor);
  friend DensityOperator operator+(DensityOperator lhs, const DensityOperator& rhs) {
    return lhs += rhs;
  }
  friend DensityOperator operator*(DensityOperator lhs, const Scalar& f) { return lhs *= f; }
  friend DensityOperator operator*(const Scalar& f, DensityOperator rhs) { return rhs *= f; }

  /// Entrywise equality (mode sets ignored).
  friend bool operator==(const DensityOperator& lhs, const DensityOperator& rhs);

  std::string str() const;

 private:
  ModeSet modes_;
  Normalization normalization_ = Normalization::unnormalized_conditional;
  Entries entries_;
};

/// |ket><ket| over the given modes (defaults to the ket's occupied modes).
DensityOperator outer(const Ket& ket, std::optional<ModeSet> modes = std::nullopt);
/// |left><right|
DensityOperator outer(const Ket& left, const Ket& right, const ModeSet& modes);
Scalar dm_trace(const DensityOperator& rho);
DensityOperator partial_trace(const DensityOperator& rho, const ModeSet& traced);

}  // namespace qtele
