#include "qtele/fock.hpp"

#include <algorithm>
#include <sstream>

namespace qtele {

// ---------------------------------------------------------------- BasisKet

BasisKet BasisKet::of(std::initializer_list<Entry> occupations) {
  BasisKet k;
  for (const auto& [mode, n] : occupations) {
    if (k.occupation(mode) != 0) throw FockError("duplicate mode '" + mode.name() + "'");
    k = k.with(mode, n);
  }
  return k;
}

unsigned BasisKet::occupation(const ModeId& mode) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), mode,
                             [](const Entry& e, const ModeId& m) { return e.first < m; });
  return (it != entries_.end() && it->first == mode) ? it->second : 0;
}

unsigned BasisKet::total_photons() const {
  unsigned total = 0;
  for (const auto& e : entries_) total += e.second;
  return total;
}

BasisKet BasisKet::with(const ModeId& mode, unsigned count) const {
  BasisKet k = *this;
  auto it = std::lower_bound(k.entries_.begin(), k.entries_.end(), mode,
                             [](const Entry& e, const ModeId& m) { return e.first < m; });
  if (it != k.entries_.end() && it->first == mode) {
    if (count == 0) {
      k.entries_.erase(it);
    } else {
      it->second = count;
    }
  } else if (count != 0) {
    k.entries_.insert(it, Entry{mode, count});
  }
  return k;
}

std::pair<BasisKet, BasisKet> BasisKet::split(const ModeSet& modes) const {
  std::pair<BasisKet, BasisKet> out;
  for (const auto& e : entries_) {
    (modes.contains(e.first) ? out.first : out.second).entries_.push_back(e);
  }
  return out;
}

std::vector<unsigned> BasisKet::occupations(std::span<const ModeId> modes) const {
  std::vector<unsigned> occ;
  occ.reserve(modes.size());
  for (const auto& m : modes) occ.push_back(occupation(m));
  return occ;
}

BasisKet BasisKet::merged(const BasisKet& other) const {
  BasisKet k = *this;
  for (const auto& [mode, n] : other.entries_) k = k.with(mode, k.occupation(mode) + n);
  return k;
}

Scalar BasisKet::metric_weight() const {
  Scalar w = 1;
  for (const auto& e : entries_) {
    if (e.second > 1) w *= factorial(e.second);
  }
  return w.inverse();
}

std::string BasisKet::str() const {
  if (entries_.empty()) return "|0>";
  std::ostringstream os;
  os << '|';
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) os << ',';
    os << entries_[i].first.name() << ':' << entries_[i].second;
  }
  os << '>';
  return os.str();
}

// --------------------------------------------------------------------- Ket

Ket Ket::vacuum(Convention convention) {
  Ket k(convention);
  k.terms_.emplace(BasisKet::vacuum(),
                   convention == Convention::normalized ? Scalar::floating(1.0) : Scalar(1));
  return k;
}

Ket Ket::basis(const BasisKet& b, const Scalar& coefficient, Convention convention) {
  Ket k(convention);
  k.add(b, coefficient);
  return k;
}

Scalar Ket::coefficient(const BasisKet& k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Scalar(0) : it->second;
}

unsigned Ket::max_photons() const {
  unsigned m = 0;
  for (const auto& t : terms_) m = std::max(m, t.first.total_photons());
  return m;
}

ModeSet Ket::occupied_modes() const {
  ModeSet modes;
  for (const auto& t : terms_) {
    for (const auto& e : t.first.entries()) modes.insert(e.first);
  }
  return modes;
}

Ket& Ket::set_photon_cap(std::optional<unsigned> cap) {
  photon_cap_ = cap;
  for (const auto& t : terms_) check_cap(t.first);
  return *this;
}

void Ket::check_cap(const BasisKet& k) const {
  if (photon_cap_ && k.total_photons() > *photon_cap_) {
    throw std::logic_error("photon cap " + std::to_string(*photon_cap_) + " exceeded by " + k.str());
  }
}

void Ket::add(const BasisKet& k, const Scalar& coefficient) {
  if (coefficient.is_zero()) return;
  check_cap(k);
  auto [it, inserted] = terms_.try_emplace(k, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Ket& Ket::operator+=(const Ket& rhs) {
  if (rhs.convention_ != convention_) throw FockError("ket convention mismatch");
  for (const auto& [k, c] : rhs.terms_) add(k, c);
  return *this;
}

Ket& Ket::operator-=(const Ket& rhs) {
  if (rhs.convention_ != convention_) throw FockError("ket convention mismatch");
  for (const auto& [k, c] : rhs.terms_) add(k, -c);
  return *this;
}

Ket& Ket::operator*=(const Scalar& factor) {
  if (factor.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.second *= factor;
  return *this;
}

bool operator==(const Ket& lhs, const Ket& rhs) {
  return lhs.convention_ == rhs.convention_ && lhs.terms_ == rhs.terms_;
}

std::string Ket::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << '(' << c << ')' << k.str();
  }
  return os.str();
}

// ------------------------------------------------------------ ladder algebra

Ket apply_creation(const Ket& ket, const ModeId& mode) {
  Ket out(ket.convention());
  out.set_photon_cap(ket.photon_cap());
  for (const auto& [k, c] : ket.terms()) {
    const unsigned n = k.occupation(mode);
    Scalar factor = ket.convention() == Convention::divided_power
                        ? Scalar(n + 1)
                        : Scalar::floating(static_cast<double>(n + 1)).sqrt();
    if (ket.convention() == Convention::normalized && c.is_exact()) {
      throw FockError("normalized-convention creation requires floating scalars");
    }
    out.add(k.with(mode, n + 1), c * factor);
  }
  return out;
}

Ket apply_annihilation(const Ket& ket, const ModeId& mode) {
  Ket out(ket.convention());
  out.set_photon_cap(ket.photon_cap());
  for (const auto& [k, c] : ket.terms()) {
    const unsigned n = k.occupation(mode);
    if (n == 0) continue;
    if (ket.convention() == Convention::divided_power) {
      out.add(k.with(mode, n - 1), c);
    } else {
      out.add(k.with(mode, n - 1), c * Scalar::floating(static_cast<double>(n)).sqrt());
    }
  }
  return out;
}

Ket apply_number(const Ket& ket, const ModeId& mode) {
  Ket out(ket.convention());
  out.set_photon_cap(ket.photon_cap());
  for (const auto& [k, c] : ket.terms()) {
    const unsigned n = k.occupation(mode);
    if (n != 0) out.add(k, c * Scalar(n));
  }
  return out;
}

Scalar inner_product(const Ket& k1, const Ket& k2) {
  if (k1.convention() != k2.convention()) throw FockError("inner product across conventions");
  Scalar sum = 0;
  const Ket& small = k1.size() <= k2.size() ? k1 : k2;
  const Ket& large = k1.size() <= k2.size() ? k2 : k1;
  for (const auto& [k, c] : small.terms()) {
    auto it = large.terms().find(k);
    if (it == large.terms().end()) continue;
    Scalar term = c * it->second;
    if (k1.convention() == Convention::divided_power) term *= k.metric_weight();
    sum += term;
  }
  return sum;
}

Scalar squared_norm(const Ket& ket) { return inner_product(ket, ket); }

Ket to_normalized(const Ket& ket) {
  if (ket.convention() == Convention::normalized) return ket;
  Ket out(Convention::normalized);
  for (const auto& [k, c] : ket.terms()) {
    // e_n = |n> / sqrt(n!)
    out.add(k, c.to_floating() * k.metric_weight().to_floating().sqrt());
  }
  return out;
}

// --------------------------------------------------------- DensityOperator

Scalar DensityOperator::entry(const BasisKet& ket, const BasisKet& bra) const {
  auto it = entries_.find(Key{ket, bra});
  return it == entries_.end() ? Scalar(0) : it->second;
}

void DensityOperator::add(const BasisKet& ket, const BasisKet& bra, const Scalar& value) {
  if (value.is_zero()) return;
  auto [it, inserted] = entries_.try_emplace(Key{ket, bra}, value);
  if (!inserted) {
    it->second += value;
    if (it->second.is_zero()) entries_.erase(it);
  }
}

Scalar DensityOperator::physical_entry(const BasisKet& ket, const BasisKet& bra) const {
  const Scalar v = entry(ket, bra);
  if (v.is_zero()) return v;
  return v * (ket.metric_weight() * bra.metric_weight()).sqrt();
}

void DensityOperator::add_physical(const BasisKet& ket, const BasisKet& bra,
                                   const Scalar& value) {
  add(ket, bra, value / (ket.metric_weight() * bra.metric_weight()).sqrt());
}

Scalar DensityOperator::expectation(const Ket& psi) const {
  if (psi.convention() != Convention::divided_power) {
    throw FockError("expectation requires a divided-power ket");
  }
  Scalar sum = 0;
  for (const auto& [key, v] : entries_) {
    const Scalar cl = psi.coefficient(key.first);
    if (cl.is_zero()) continue;
    const Scalar cr = psi.coefficient(key.second);
    if (cr.is_zero()) continue;
    sum += v * cl * key.first.metric_weight() * cr * key.second.metric_weight();
  }
  return sum;
}

bool DensityOperator::is_hermitian() const {
  for (const auto& [key, v] : entries_) {
    if (entry(key.second, key.first) != v) return false;
  }
  return true;
}

bool DensityOperator::has_nonnegative_diagonal() const {
  for (const auto& [key, v] : entries_) {
    if (key.first == key.second && v.sign() < 0) return false;
  }
  return true;
}

DensityOperator& DensityOperator::operator+=(const DensityOperator& rhs) {
  modes_.insert(rhs.modes_.begin(), rhs.modes_.end());
  for (const auto& [key, v] : rhs.entries_) add(key.first, key.second, v);
  return *this;
}

DensityOperator& DensityOperator::operator*=(const Scalar& factor) {
  if (factor.is_zero()) {
    entries_.clear();
    return *this;
  }
  for (auto& e : entries_) e.second *= factor;
  return *this;
}

bool operator==(const DensityOperator& lhs, const DensityOperator& rhs) {
  return lhs.entries_ == rhs.entries_;
}

std::string DensityOperator::str() const {
  if (entries_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, v] : entries_) {
    if (!first) os << " + ";
    first = false;
    os << '(' << v << ')' << key.first.str() << '<' << key.second.str().substr(1);
  }
  return os.str();
}

DensityOperator outer(const Ket& ket, std::optional<ModeSet> modes) {
  return outer(ket, ket, modes ? *modes : ket.occupied_modes());
}

DensityOperator outer(const Ket& left, const Ket& right, const ModeSet& modes) {
  if (left.convention() != Convention::divided_power ||
      right.convention() != Convention::divided_power) {
    throw FockError("density operators use the divided-power basis");
  }
  DensityOperator rho(modes);
  for (const auto& [kl, cl] : left.terms()) {
    for (const auto& [kr, cr] : right.terms()) rho.add(kl, kr, cl * cr);
  }
  return rho;
}

Scalar dm_trace(const DensityOperator& rho) {
  Scalar t = 0;
  for (const auto& [key, v] : rho.entries()) {
    if (key.first == key.second) t += v * key.first.metric_weight();
  }
  return t;
}

DensityOperator partial_trace(const DensityOperator& rho, const ModeSet& traced) {
  for (const auto& m : traced) {
    if (!rho.modes().contains(m)) throw FockError("partial trace over unknown mode '" + m.name() + "'");
  }
  ModeSet remaining;
  std::set_difference(rho.modes().begin(), rho.modes().end(), traced.begin(), traced.end(),
                      std::inserter(remaining, remaining.end()));
  DensityOperator out(remaining, rho.normalization());
  for (const auto& [key, v] : rho.entries()) {
    auto [ket_traced, ket_rest] = key.first.split(traced);
    auto [bra_traced, bra_rest] = key.second.split(traced);
    if (ket_traced != bra_traced) continue;
    out.add(ket_rest, bra_rest, v * ket_traced.metric_weight());
  }
  return out;
}

}  // namespace qtele
