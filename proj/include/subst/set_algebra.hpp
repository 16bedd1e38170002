#pragma once

// Concrete set algebras over units V ⊆ ^n U. A point q ∈ ^n U is encoded as
// the base-u integer sum q(i) u^i; element bitsets are indexed by point code
// over the whole ambient space ^n U and always stay inside the unit.

#include "subst/core.hpp"
#include "subst/perm.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace subst {

using Point = std::vector<int>;

class Unit {
 public:
  int dim() const { return dim_; }
  int base() const { return base_; }
  std::uint64_t ambient_size() const { return size_; }
  const Bits& members() const { return members_; }
  std::size_t count() const { return members_.count(); }
  bool contains(std::uint64_t p) const { return p < size_ && members_.test(p); }

  bool square() const { return square_; }
  bool permutable() const { return permutable_; }
  bool dipermutable() const { return dipermutable_; }

  Point decode(std::uint64_t p) const {
    Point q(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i) {
      q[i] = static_cast<int>(p % static_cast<std::uint64_t>(base_));
      p /= static_cast<std::uint64_t>(base_);
    }
    return q;
  }

  std::uint64_t encode(const Point& q) const {
    if (static_cast<int>(q.size()) != dim_) throw Error("point has wrong length");
    std::uint64_t p = 0;
    for (int i = dim_ - 1; i >= 0; --i) {
      if (q[i] < 0 || q[i] >= base_) throw Error("point coordinate out of range");
      p = p * static_cast<std::uint64_t>(base_) + static_cast<std::uint64_t>(q[i]);
    }
    return p;
  }

  /// Code of q ∘ t where q is the point with code p.
  std::uint64_t pull(std::uint64_t p, const Transformation& t) const {
    const auto q = decode(p);
    std::uint64_t r = 0;
    for (int i = dim_ - 1; i >= 0; --i) r = r * static_cast<std::uint64_t>(base_) + static_cast<std::uint64_t>(q[t(i)]);
    return r;
  }

  std::vector<std::uint64_t> points() const {
    std::vector<std::uint64_t> out;
    for (auto p = members_.find_first(); p != Bits::npos; p = members_.find_next(p)) out.push_back(p);
    return out;
  }

  bool operator==(const Unit& o) const {
    return dim_ == o.dim_ && base_ == o.base_ && members_ == o.members_;
  }

  friend Unit classify_unit(int dim, int base, Bits membership, const Limits& lim);

 private:
  int dim_ = 0;
  int base_ = 0;
  std::uint64_t size_ = 0;
  Bits members_;
  bool square_ = false;
  bool permutable_ = false;
  bool dipermutable_ = false;
};

using UnitPtr = std::shared_ptr<const Unit>;

inline std::uint64_t ambient_points(int dim, int base, const Limits& lim = default_limits()) {
  if (dim < 1) throw Error("unit dimension must be positive");
  if (base < 0) throw Error("negative base");
  if (base == 0) return 0;
  std::uint64_t s = 1;
  for (int i = 0; i < dim; ++i) {
    s *= static_cast<std::uint64_t>(base);
    if (s > lim.max_points) throw BudgetExceeded("unit ^" + std::to_string(dim) + " " + std::to_string(base) + " exceeds the point cap");
  }
  return s;
}

/// Computes the closure flags of a membership set exactly.
inline Unit classify_unit(int dim, int base, Bits membership, const Limits& lim = default_limits()) {
  Unit u;
  u.dim_ = dim;
  u.base_ = base;
  u.size_ = ambient_points(dim, base, lim);
  if (membership.size() != u.size_) throw Error("membership bitset has wrong size");
  u.members_ = std::move(membership);
  u.square_ = u.members_.count() == u.size_;
  auto closed_under = [&](const std::vector<Transformation>& ts) {
    for (auto p = u.members_.find_first(); p != Bits::npos; p = u.members_.find_next(p))
      for (const auto& t : ts)
        if (!u.members_.test(u.pull(p, t))) return false;
    return true;
  };
  std::vector<Transformation> swaps, reps;
  for (const auto& l : generator_letters(dim, SigKind::SA))
    (l.is_transpose() ? swaps : reps).push_back(l.value(dim));
  u.permutable_ = closed_under(swaps);
  u.dipermutable_ = u.permutable_ && closed_under(reps);
  return u;
}

inline UnitPtr make_unit(int dim, int base, Bits membership, const Limits& lim = default_limits()) {
  return std::make_shared<const Unit>(classify_unit(dim, base, std::move(membership), lim));
}

inline UnitPtr square_unit(int dim, int base, const Limits& lim = default_limits()) {
  Bits all(ambient_points(dim, base, lim));
  all.set();
  return make_unit(dim, base, std::move(all), lim);
}

inline UnitPtr unit_from_points(int dim, int base, const std::vector<Point>& pts, const Limits& lim = default_limits()) {
  Bits m(ambient_points(dim, base, lim));
  Unit probe = classify_unit(dim, base, Bits(m.size()), lim);
  for (const auto& q : pts) m.set(probe.encode(q));
  return make_unit(dim, base, std::move(m), lim);
}

/// Smallest permutable superset: orbit closure under all transpositions.
inline UnitPtr permutable_closure(int dim, int base, const Bits& membership, const Limits& lim = default_limits()) {
  Unit probe = classify_unit(dim, base, Bits(ambient_points(dim, base, lim)), lim);
  Bits m = membership;
  std::vector<std::uint64_t> stack;
  for (auto p = m.find_first(); p != Bits::npos; p = m.find_next(p)) stack.push_back(p);
  std::vector<Transformation> swaps;
  for (const auto& l : generator_letters(dim, SigKind::TA)) swaps.push_back(l.value(dim));
  while (!stack.empty()) {
    auto p = stack.back();
    stack.pop_back();
    for (const auto& t : swaps) {
      auto r = probe.pull(p, t);
      if (!m.test(r)) {
        m.set(r);
        stack.push_back(r);
      }
    }
  }
  return make_unit(dim, base, std::move(m), lim);
}

/// An element of ℘(V): a subset of the unit.
class DenseSet {
 public:
  DenseSet() = default;
  DenseSet(UnitPtr unit, Bits bits) : unit_(std::move(unit)), bits_(std::move(bits)) {
    if (bits_.size() != unit_->ambient_size()) throw Error("DenseSet: bitset size mismatch");
    if (!bits_.is_subset_of(unit_->members())) throw Error("DenseSet: bits outside the unit");
  }

  static DenseSet empty(UnitPtr unit) {
    Bits b(unit->ambient_size());
    return DenseSet(std::move(unit), std::move(b));
  }
  static DenseSet full(UnitPtr unit) {
    Bits b = unit->members();
    return DenseSet(std::move(unit), std::move(b));
  }
  static DenseSet of_points(UnitPtr unit, const std::vector<Point>& pts) {
    Bits b(unit->ambient_size());
    for (const auto& q : pts) b.set(unit->encode(q));
    return DenseSet(std::move(unit), std::move(b));
  }

  const UnitPtr& unit() const { return unit_; }
  const Bits& bits() const { return bits_; }
  bool contains(std::uint64_t p) const { return p < bits_.size() && bits_.test(p); }
  bool contains(const Point& q) const { return contains(unit_->encode(q)); }
  bool is_empty() const { return bits_.none(); }
  std::size_t count() const { return bits_.count(); }

  DenseSet operator&(const DenseSet& o) const { return DenseSet(unit_, bits_ & same(o).bits_); }
  DenseSet operator|(const DenseSet& o) const { return DenseSet(unit_, bits_ | same(o).bits_); }
  DenseSet operator~() const { return DenseSet(unit_, unit_->members() - bits_); }
  DenseSet operator-(const DenseSet& o) const { return DenseSet(unit_, bits_ - same(o).bits_); }
  bool operator==(const DenseSet& o) const { return bits_ == o.bits_ && *unit_ == *o.unit_; }
  bool subset_of(const DenseSet& o) const { return bits_.is_subset_of(same(o).bits_); }

  std::vector<Point> points() const {
    std::vector<Point> out;
    for (auto p = bits_.find_first(); p != Bits::npos; p = bits_.find_next(p)) out.push_back(unit_->decode(p));
    return out;
  }

 private:
  const DenseSet& same(const DenseSet& o) const {
    if (unit_ != o.unit_ && !(*unit_ == *o.unit_)) throw Error("DenseSet: operands live in different units");
    return o;
  }

  UnitPtr unit_;
  Bits bits_;
};

/// Hex bitmask: the integer sum of 2^p over member points p, most significant digit first.
inline std::string to_hex(const Bits& b) {
  static const char* digits = "0123456789abcdef";
  if (b.size() == 0) return "0";
  std::string s;
  const std::size_t nd = (b.size() + 3) / 4;
  for (std::size_t d = nd; d-- > 0;) {
    unsigned v = 0;
    for (unsigned k = 0; k < 4; ++k) {
      std::size_t p = d * 4 + k;
      if (p < b.size() && b.test(p)) v |= 1u << k;
    }
    s += digits[v];
  }
  return s;
}

inline Bits from_hex(const std::string& hex, std::size_t size) {
  Bits b(size);
  std::string h = hex;
  if (h.rfind("0x", 0) == 0) h = h.substr(2);
  const std::size_t nd = h.size();
  for (std::size_t k = 0; k < nd; ++k) {
    char c = h[nd - 1 - k];
    unsigned v;
    if (c >= '0' && c <= '9') v = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') v = static_cast<unsigned>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F') v = static_cast<unsigned>(c - 'A' + 10);
    else throw Error("invalid hex digit in bitmask");
    for (unsigned bit = 0; bit < 4; ++bit) {
      if (!(v & (1u << bit))) continue;
      std::size_t p = k * 4 + bit;
      if (p >= size) throw Error("bitmask has bits beyond the ambient space");
      b.set(p);
    }
  }
  return b;
}

inline std::string to_hex(const DenseSet& x) { return to_hex(x.bits()); }

/// A unit together with the operation signature it carries.
class SetAlgebra {
 public:
  SetAlgebra(UnitPtr unit, SigKind kind) : unit_(std::move(unit)), sig_{unit_->dim(), kind} {
    if (kind == SigKind::TA && !unit_->permutable()) throw Error("TA set algebra needs a permutable unit");
    if (kind != SigKind::TA && !unit_->dipermutable()) throw Error("SA set algebra needs a dipermutable unit");
  }

  const UnitPtr& unit() const { return unit_; }
  Signature signature() const { return sig_; }
  int dim() const { return sig_.dim; }

  DenseSet top() const { return DenseSet::full(unit_); }
  DenseSet bottom() const { return DenseSet::empty(unit_); }
  DenseSet element(const Bits& b) const { return DenseSet(unit_, b); }

  /// S_t(X) = {q ∈ V : q ∘ t ∈ X}.
  DenseSet apply(const DenseSet& x, const Transformation& t) const {
    if (t.dim() != sig_.dim) throw Error("apply_subst: dimension mismatch");
    if (!sig_.replacements() && !t.is_permutation())
      throw Error("apply_subst: replacement " + t.to_string() + " not in TA signature");
    const auto& table = pull_table(t);
    Bits out(unit_->ambient_size());
    const auto& m = unit_->members();
    std::size_t k = 0;
    for (auto p = m.find_first(); p != Bits::npos; p = m.find_next(p), ++k)
      if (x.contains(table[k])) out.set(p);
    return DenseSet(unit_, std::move(out));
  }

  DenseSet apply(const DenseSet& x, const Letter& l) const {
    check_letter(l, sig_.dim);
    return apply(x, l.value(sig_.dim));
  }

  /// d_ij = {q ∈ V : q(i) = q(j)}.
  DenseSet diagonal(int i, int j) const {
    if (!sig_.diagonals()) throw Error("diagonal elements need the SAD signature");
    return diagonal_set(i, j);
  }

  DenseSet diagonal_set(int i, int j) const {
    if (i < 0 || j < 0 || i >= sig_.dim || j >= sig_.dim) throw Error("diagonal index out of range");
    Bits out(unit_->ambient_size());
    const auto& m = unit_->members();
    for (auto p = m.find_first(); p != Bits::npos; p = m.find_next(p)) {
      auto q = unit_->decode(p);
      if (q[i] == q[j]) out.set(p);
    }
    return DenseSet(unit_, std::move(out));
  }

  /// Element from a small integer mask over ambient point codes (used by exhaustive sweeps).
  DenseSet from_mask(std::uint64_t mask) const {
    Bits b(unit_->ambient_size());
    for (std::uint64_t p = 0; p < b.size() && p < 64; ++p)
      if (mask >> p & 1u) b.set(p);
    b &= unit_->members();
    return DenseSet(unit_, std::move(b));
  }

 private:
  /// q ∘ t for every member q, in member order; built once per transformation.
  const std::vector<std::uint64_t>& pull_table(const Transformation& t) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->tables.find(t);
    if (it != cache_->tables.end()) return it->second;
    std::vector<std::uint64_t> table;
    table.reserve(unit_->count());
    const auto& m = unit_->members();
    for (auto p = m.find_first(); p != Bits::npos; p = m.find_next(p)) table.push_back(unit_->pull(p, t));
    return cache_->tables.emplace(t, std::move(table)).first->second;
  }

  struct Cache {
    std::mutex mu;
    std::map<Transformation, std::vector<std::uint64_t>> tables;
  };

  UnitPtr unit_;
  Signature sig_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// A_nk: the full algebra over ^n k.
inline SetAlgebra small_algebra(int n, int k, SigKind kind, const Limits& lim = default_limits()) {
  if (k > n) throw Error("small_algebra: k must not exceed n");
  if (k < 0 || n < 2) throw Error("small_algebra: bad parameters");
  return SetAlgebra(square_unit(n, k, lim), kind);
}

inline DenseSet apply_subst(const SetAlgebra& alg, const DenseSet& x, const Transformation& t) {
  return alg.apply(x, t);
}

inline DenseSet diagonal_element(const SetAlgebra& alg, int i, int j) { return alg.diagonal(i, j); }

/// Relativization h(x) = x ∩ G into ℘(G); g must be closed for the signature.
inline DenseSet relativize_hom(const DenseSet& x, const UnitPtr& g, SigKind kind) {
  const auto& src = *x.unit();
  if (g->dim() != src.dim() || g->base() != src.base()) throw Error("relativize_hom: G lives in a different space");
  if (!g->members().is_subset_of(src.members())) throw Error("relativize_hom: G is not contained in the source unit");
  if (!g->permutable()) throw Error("relativize_hom: G is not permutable");
  if (kind != SigKind::TA && !g->dipermutable()) throw Error("relativize_hom: G is not dipermutable");
  return DenseSet(g, x.bits() & g->members());
}

/// Units of injective sequences in ^n n (the point set S_n) and of all of ^n n.
inline UnitPtr monoid_unit(int n, SigKind kind, const Limits& lim = default_limits()) {
  if (kind != SigKind::TA) return square_unit(n, n, lim);
  Bits m(ambient_points(n, n, lim));
  Unit probe = classify_unit(n, n, Bits(m.size()), lim);
  for (const auto& t : enumerate_monoid(n, SigKind::TA, lim)) {
    Point q(t.images().begin(), t.images().end());
    m.set(probe.encode(q));
  }
  return make_unit(n, n, std::move(m), lim);
}

inline Point as_point(const Transformation& t) { return Point(t.images().begin(), t.images().end()); }

}  // namespace subst
