#pragma once

// Finite algebras given by their atom structure, representations into set
// algebras built from principal ultrafilters, and their verification.

#include "subst/axioms.hpp"
#include "subst/core.hpp"
#include "subst/free_algebra.hpp"
#include "subst/perm.hpp"
#include "subst/set_algebra.hpp"
#include "subst/term.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace subst {

/// A finite BAO as a powerset of atoms with additive operators: the image of
/// an element under s_l is the union of the images of its atoms.
class FiniteAlgebra {
 public:
  FiniteAlgebra(Signature sig, std::size_t num_atoms) : sig_(sig), n_atoms_(num_atoms), letters_(generator_letters(sig.dim, sig.kind)) {
    images_.assign(letters_.size(), std::vector<Bits>(num_atoms, Bits(num_atoms)));
  }

  Signature signature() const { return sig_; }
  int dim() const { return sig_.dim; }
  std::size_t num_atoms() const { return n_atoms_; }
  const std::vector<Letter>& letters() const { return letters_; }

  Bits top() const { return Bits(n_atoms_).set(); }
  Bits bottom() const { return Bits(n_atoms_); }
  Bits atom(std::size_t k) const {
    Bits b(n_atoms_);
    b.set(k);
    return b;
  }

  std::size_t letter_index(const Letter& l) const {
    for (std::size_t k = 0; k < letters_.size(); ++k)
      if (letters_[k] == l) return k;
    throw Error("letter " + l.to_string() + " not in signature " + to_string(sig_.kind));
  }

  Bits& image(std::size_t letter, std::size_t atom) { return images_[letter][atom]; }
  const Bits& image(std::size_t letter, std::size_t atom) const { return images_[letter][atom]; }

  Bits apply(const Bits& x, const Letter& l) const {
    const auto li = letter_index(l);
    Bits out(n_atoms_);
    for (auto a = x.find_first(); a != Bits::npos; a = x.find_next(a)) out |= images_[li][a];
    return out;
  }

  /// S_t x through a word for t: hat(l1...lk) = l1∘...∘lk acts as S_l1(...S_lk(x)).
  Bits apply(const Bits& x, const Transformation& t) const {
    const auto w = decompose(t, sig_.kind);
    Bits out = x;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) out = apply(out, *it);
    return out;
  }

  void set_diagonal(int i, int j, Bits b) { diags_[{i, j}] = std::move(b); }
  Bits diagonal(int i, int j) const {
    if (!sig_.diagonals()) throw Error("diagonal elements need the SAD signature");
    auto it = diags_.find({i, j});
    if (it == diags_.end()) throw Error("diagonal d[" + std::to_string(i) + "," + std::to_string(j) + "] undefined");
    return it->second;
  }

  std::vector<std::string> atom_labels;

 private:
  Signature sig_;
  std::size_t n_atoms_;
  std::vector<Letter> letters_;
  std::vector<std::vector<Bits>> images_;
  std::map<std::pair<int, int>, Bits> diags_;
};

using AbstractAssignment = std::vector<Bits>;

inline Bits eval_abstract(const Term& t, const AbstractAssignment& asg, const FiniteAlgebra& a) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      const auto i = static_cast<std::size_t>(t.index());
      if (i >= asg.size()) throw Error("eval: no binding for x" + std::to_string(t.index()));
      return asg[i];
    }
    case Term::Kind::Top: return a.top();
    case Term::Kind::Bottom: return a.bottom();
    case Term::Kind::Diag: return a.diagonal(t.diag_i(), t.diag_j());
    case Term::Kind::Not: return ~eval_abstract(t.child(), asg, a);
    case Term::Kind::And: return eval_abstract(t.left(), asg, a) & eval_abstract(t.right(), asg, a);
    case Term::Kind::Or: return eval_abstract(t.left(), asg, a) | eval_abstract(t.right(), asg, a);
    case Term::Kind::Subst: return a.apply(eval_abstract(t.child(), asg, a), t.letter());
  }
  throw Error("eval: unknown term kind");
}

struct AxiomReport {
  bool ok = true;
  std::size_t instances = 0;
  std::size_t evaluations = 0;
  std::vector<std::string> failures;  // first few, "schema: equation"
};

/// Checks every non-Boolean axiom instance on assignments drawn from the atoms
/// and 0. The operators are additive, so this is exact: both sides of each
/// instance are additive in each variable, and the endomorphism schemas reduce
/// to disjointness and covering of atom images.
inline AxiomReport validate_axioms(const FiniteAlgebra& a) {
  AxiomReport rep;
  std::vector<Bits> pool{a.bottom()};
  for (std::size_t k = 0; k < a.num_atoms(); ++k) pool.push_back(a.atom(k));
  for (const auto& ax : instantiate_axioms(a.signature())) {
    if (ax.schema[0] == 'B') continue;
    ++rep.instances;
    const auto vs = vars_of(ax.eq);
    std::vector<int> used(vs.begin(), vs.end());
    AbstractAssignment asg(used.empty() ? 0 : static_cast<std::size_t>(used.back() + 1), a.bottom());
    std::vector<std::size_t> idx(used.size(), 0);
    bool failed = false;
    while (!failed) {
      for (std::size_t k = 0; k < used.size(); ++k) asg[used[k]] = pool[idx[k]];
      ++rep.evaluations;
      if (eval_abstract(ax.eq.lhs, asg, a) != eval_abstract(ax.eq.rhs, asg, a)) failed = true;
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == pool.size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
    if (failed) {
      rep.ok = false;
      if (rep.failures.size() < 8) rep.failures.push_back(ax.schema + ": " + to_string(ax.eq));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Constructions

/// ℘(V) itself: atoms are the points of the unit in code order.
inline FiniteAlgebra from_set_algebra(const SetAlgebra& alg) {
  const auto& unit = *alg.unit();
  const auto pts = unit.points();
  std::map<std::uint64_t, std::size_t> index;
  for (std::size_t k = 0; k < pts.size(); ++k) index[pts[k]] = k;
  FiniteAlgebra a(alg.signature(), pts.size());
  for (std::size_t li = 0; li < a.letters().size(); ++li) {
    const auto t = a.letters()[li].value(alg.dim());
    for (std::size_t q = 0; q < pts.size(); ++q) a.image(li, index.at(unit.pull(pts[q], t))).set(q);
  }
  if (alg.signature().diagonals())
    for (int i = 0; i < alg.dim(); ++i)
      for (int j = 0; j < alg.dim(); ++j) {
        Bits d(pts.size());
        for (std::size_t q = 0; q < pts.size(); ++q) {
          auto p = unit.decode(pts[q]);
          if (p[i] == p[j]) d.set(q);
        }
        a.set_diagonal(i, j, std::move(d));
      }
  for (auto p : pts) {
    std::string s;
    for (int v : unit.decode(p)) s += std::to_string(v);
    a.atom_labels.push_back(s);
  }
  return a;
}

/// A subalgebra of a set algebra together with the concrete set of each atom.
struct ConcreteSubalgebra {
  FiniteAlgebra algebra;
  std::vector<DenseSet> atom_sets;
};

/// Subalgebra generated by `gens`: its atoms are the cells of the partition of
/// points by membership in every S_τ g (and every diagonal under SAD).
inline ConcreteSubalgebra generated_subalgebra(const SetAlgebra& alg, const std::vector<DenseSet>& gens) {
  const auto& unit = alg.unit();
  const auto sig = alg.signature();
  std::vector<Bits> features;
  for (const auto& t : enumerate_monoid(sig.dim, sig.kind))
    for (const auto& g : gens) features.push_back(alg.apply(g, t).bits());
  if (sig.diagonals())
    for (int i = 0; i < sig.dim; ++i)
      for (int j = i + 1; j < sig.dim; ++j) features.push_back(alg.diagonal(i, j).bits());
  std::map<std::vector<bool>, std::size_t> cell_of_key;
  std::vector<Bits> cells;
  for (auto p : unit->points()) {
    std::vector<bool> key;
    for (const auto& f : features) key.push_back(f.test(p));
    auto [it, fresh] = cell_of_key.emplace(key, cells.size());
    if (fresh) cells.emplace_back(unit->ambient_size());
    cells[it->second].set(p);
  }
  std::vector<std::size_t> cell_of_point(unit->ambient_size(), 0);
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (auto p = cells[c].find_first(); p != Bits::npos; p = cells[c].find_next(p)) cell_of_point[p] = c;

  auto as_atoms = [&](const Bits& set) {
    Bits out(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const bool inside = cells[c].is_subset_of(set);
      if (!inside && cells[c].intersects(set)) throw std::logic_error("internal: subalgebra cell split by an operation");
      if (inside) out.set(c);
    }
    return out;
  };
  ConcreteSubalgebra sub{FiniteAlgebra(sig, cells.size()), {}};
  for (std::size_t li = 0; li < sub.algebra.letters().size(); ++li)
    for (std::size_t c = 0; c < cells.size(); ++c)
      sub.algebra.image(li, c) = as_atoms(alg.apply(DenseSet(unit, cells[c]), sub.algebra.letters()[li]).bits());
  if (sig.diagonals())
    for (int i = 0; i < sig.dim; ++i)
      for (int j = 0; j < sig.dim; ++j) sub.algebra.set_diagonal(i, j, as_atoms(alg.diagonal(i, j).bits()));
  for (const auto& c : cells) sub.atom_sets.emplace_back(unit, c);
  return sub;
}

/// Fr_m as an abstract algebra: atoms are the minterms over the alphabet.
inline FiniteAlgebra from_free(const FreeAlgebra& h) {
  const std::size_t k = h.alphabet.size();
  if (k > 16) throw BudgetExceeded("free algebra too large to materialize");
  const std::size_t n_atoms = std::size_t{1} << k;
  FiniteAlgebra a(h.sig, n_atoms);
  for (std::size_t li = 0; li < a.letters().size(); ++li) {
    const auto t = a.letters()[li].value(h.sig.dim);
    for (std::size_t r = 0; r < n_atoms; ++r) {
      Bits row(n_atoms);
      row.set(r);
      a.image(li, r) = subst_action(h, NormalForm{h.alphabet, row}, t).table;
    }
  }
  return a;
}

inline FiniteAlgebra two_element(Signature sig) {
  FiniteAlgebra a(sig, 1);
  for (std::size_t li = 0; li < a.letters().size(); ++li) a.image(li, 0).set(0);
  if (sig.diagonals())
    for (int i = 0; i < sig.dim; ++i)
      for (int j = 0; j < sig.dim; ++j) a.set_diagonal(i, j, a.top());
  return a;
}

/// Rl_b A: elements below b, operations s(x)·b and d·b.
inline FiniteAlgebra relativize_Rl(const FiniteAlgebra& a, const Bits& b) {
  if (b.none()) throw Error("relativize_Rl: b must be nonzero");
  std::vector<std::size_t> atoms;
  for (auto k = b.find_first(); k != Bits::npos; k = b.find_next(k)) atoms.push_back(k);
  auto restrict = [&](const Bits& x) {
    Bits out(atoms.size());
    for (std::size_t k = 0; k < atoms.size(); ++k)
      if (x.test(atoms[k])) out.set(k);
    return out;
  };
  FiniteAlgebra r(a.signature(), atoms.size());
  for (std::size_t li = 0; li < a.letters().size(); ++li)
    for (std::size_t k = 0; k < atoms.size(); ++k) r.image(li, k) = restrict(a.image(li, atoms[k]));
  if (a.signature().diagonals())
    for (int i = 0; i < a.dim(); ++i)
      for (int j = 0; j < a.dim(); ++j) r.set_diagonal(i, j, restrict(a.diagonal(i, j)));
  for (auto k : atoms)
    if (k < a.atom_labels.size()) r.atom_labels.push_back(a.atom_labels[k]);
  return r;
}

/// A frame: states and, per letter of the signature, pairs (t, s) meaning
/// s ∈ s_l({t}). Diagonals, when present, are sets of states.
struct Frame {
  Signature sig;
  std::size_t states = 0;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> relations;  // indexed like generator_letters
  std::map<std::pair<int, int>, std::vector<std::size_t>> diagonals;
};

/// Complex algebra: s_l(X) = {s : ∃t ∈ X, (t, s) ∈ R_l}.
inline FiniteAlgebra complex_algebra(const Frame& f) {
  FiniteAlgebra a(f.sig, f.states);
  if (f.relations.size() != a.letters().size()) throw Error("complex_algebra: one relation per letter expected");
  for (std::size_t li = 0; li < f.relations.size(); ++li)
    for (auto [t, s] : f.relations[li]) {
      if (t >= f.states || s >= f.states) throw Error("complex_algebra: state out of range");
      a.image(li, t).set(s);
    }
  if (f.sig.diagonals())
    for (int i = 0; i < f.sig.dim; ++i)
      for (int j = 0; j < f.sig.dim; ++j) {
        Bits d(f.states);
        auto it = f.diagonals.find({i, j});
        if (it != f.diagonals.end())
          for (auto s : it->second) d.set(s);
        a.set_diagonal(i, j, std::move(d));
      }
  return a;
}

/// The functional frame of a unit: (t, s) ∈ R_l iff t = s ∘ l.
inline Frame unit_frame(const UnitPtr& unit, SigKind kind) {
  Frame f;
  f.sig = Signature{unit->dim(), kind};
  const auto pts = unit->points();
  f.states = pts.size();
  std::map<std::uint64_t, std::size_t> index;
  for (std::size_t k = 0; k < pts.size(); ++k) index[pts[k]] = k;
  for (const auto& l : generator_letters(unit->dim(), kind)) {
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t s = 0; s < pts.size(); ++s) rel.emplace_back(index.at(unit->pull(pts[s], l.value(unit->dim()))), s);
    f.relations.push_back(std::move(rel));
  }
  if (kind == SigKind::SAD)
    for (int i = 0; i < unit->dim(); ++i)
      for (int j = 0; j < unit->dim(); ++j)
        for (std::size_t s = 0; s < pts.size(); ++s) {
          auto q = unit->decode(pts[s]);
          if (q[i] == q[j]) f.diagonals[{i, j}].push_back(s);
        }
  return f;
}

inline bool same_tables(const FiniteAlgebra& a, const FiniteAlgebra& b) {
  if (a.signature() != b.signature() || a.num_atoms() != b.num_atoms()) return false;
  for (std::size_t li = 0; li < a.letters().size(); ++li)
    for (std::size_t k = 0; k < a.num_atoms(); ++k)
      if (a.image(li, k) != b.image(li, k)) return false;
  if (a.signature().diagonals())
    for (int i = 0; i < a.dim(); ++i)
      for (int j = 0; j < a.dim(); ++j)
        if (a.diagonal(i, j) != b.diagonal(i, j)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Representations

struct Representation {
  std::shared_ptr<const FiniteAlgebra> source;
  SetAlgebra target;
  std::function<DenseSet(const Bits&)> map;
  bool claims_injective = true;
};

/// h(z) = {ξ : a ≤ S_ξ z} into ℘(S_n) (TA) or ℘(^nn) (SA), for the principal ultrafilter of atom a.
inline Representation ultrafilter_rep(std::shared_ptr<const FiniteAlgebra> a, std::size_t atom) {
  if (atom >= a->num_atoms()) throw Error("ultrafilter_rep: atom index out of range");
  const auto sig = a->signature();
  auto unit = monoid_unit(sig.dim, sig.kind);
  const auto monoid = enumerate_monoid(sig.dim, sig.kind);
  std::vector<std::uint64_t> codes;
  for (const auto& t : monoid) codes.push_back(unit->encode(as_point(t)));
  auto src = a;
  auto map = [src, unit, monoid, codes, atom](const Bits& z) {
    Bits out(unit->ambient_size());
    for (std::size_t k = 0; k < monoid.size(); ++k)
      if (src->apply(z, monoid[k]).test(atom)) out.set(codes[k]);
    return DenseSet(unit, std::move(out));
  };
  return Representation{a, SetAlgebra(unit, sig.kind), map, false};
}

/// Disjoint union over atoms a of copies of the monoid points; copy c holds
/// (c·n + ξ(0), ..., c·n + ξ(n-1)) for every ξ.
inline Representation disjoint_union_rep(std::shared_ptr<const FiniteAlgebra> a, const Limits& lim = default_limits()) {
  const auto sig = a->signature();
  const int n = sig.dim;
  const std::size_t na = a->num_atoms();
  const int base = static_cast<int>(na) * n;
  if (na == 0) throw Error("representation of the one-element algebra is empty");
  const auto monoid = enumerate_monoid(n, sig.kind, lim);
  Bits members(ambient_points(n, base, lim));
  Unit probe = classify_unit(n, base, Bits(members.size()), lim);
  std::vector<std::vector<std::uint64_t>> codes(na);
  for (std::size_t c = 0; c < na; ++c)
    for (const auto& t : monoid) {
      Point q = as_point(t);
      for (auto& v : q) v += static_cast<int>(c) * n;
      codes[c].push_back(probe.encode(q));
      members.set(codes[c].back());
    }
  auto unit = make_unit(n, base, std::move(members), lim);
  auto src = a;
  auto map = [src, unit, monoid, codes](const Bits& z) {
    Bits out(unit->ambient_size());
    for (std::size_t k = 0; k < monoid.size(); ++k) {
      const Bits img = src->apply(z, monoid[k]);
      for (auto c = img.find_first(); c != Bits::npos; c = img.find_next(c)) out.set(codes[c][k]);
    }
    return DenseSet(unit, std::move(out));
  };
  return Representation{a, SetAlgebra(unit, sig.kind), map, true};
}

inline Representation complete_rep(std::shared_ptr<const FiniteAlgebra> a, const Limits& lim = default_limits()) {
  if (a->signature().kind != SigKind::TA) throw Error("complete_rep: TA signature required (use atom_sum_criterion for SA)");
  return disjoint_union_rep(std::move(a), lim);
}

struct RepresentationReport {
  bool homomorphism = true;
  bool injective = true;
  bool atom_cover = true;
  bool meets_preserved = true;
  bool omission = true;           // ∏Y = 0 ⟹ ⋂ h(Y) = ∅ for Y ⊆ At
  bool preimages_principal = true;
  bool exhaustive = false;        // every element and subset checked
  std::uint64_t elements_checked = 0;
  std::uint64_t subsets_checked = 0;
  std::vector<std::string> failures;

  bool ok(bool need_injective) const {
    return homomorphism && (!need_injective || injective) && atom_cover && meets_preserved && omission &&
           preimages_principal;
  }
};

/// Checks homomorphism laws, injectivity, atom cover and meet preservation.
/// Algebras with at most 16 elements are checked on every element and every
/// subset; larger ones on 0, 1, the atoms and `samples` random elements, every
/// set of atoms (pairwise when there are more than 16 atoms, which decides the
/// same property) and `samples` random subsets.
inline RepresentationReport verify_representation(const Representation& rep, std::uint64_t seed = 0,
                                                  std::uint64_t samples = 1000) {
  RepresentationReport out;
  const auto& a = *rep.source;
  const auto& tgt = rep.target;
  const std::size_t na = a.num_atoms();
  auto fail = [&](bool& flag, const std::string& m) {
    flag = false;
    if (out.failures.size() < 8) out.failures.push_back(m);
  };
  std::mt19937_64 rng(seed);
  auto random_element = [&] {
    Bits b(na);
    for (std::size_t k = 0; k < na; ++k)
      if (rng() & 1u) b.set(k);
    return b;
  };

  out.exhaustive = na <= 4;
  std::vector<Bits> elems;
  if (out.exhaustive) {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << na); ++m) {
      Bits b(na);
      for (std::size_t k = 0; k < na; ++k)
        if (m >> k & 1u) b.set(k);
      elems.push_back(b);
    }
  } else {
    elems.push_back(a.bottom());
    elems.push_back(a.top());
    for (std::size_t k = 0; k < na; ++k) elems.push_back(a.atom(k));
    for (std::uint64_t s = 0; s < samples; ++s) elems.push_back(random_element());
  }
  std::vector<DenseSet> images;
  for (const auto& x : elems) images.push_back(rep.map(x));
  out.elements_checked = elems.size();

  if (!(rep.map(a.bottom()) == tgt.bottom())) fail(out.homomorphism, "h(0) != 0");
  if (!(rep.map(a.top()) == tgt.top())) fail(out.homomorphism, "h(1) != 1");
  for (std::size_t e = 0; e < elems.size(); ++e) {
    if (!(rep.map(~elems[e]) == ~images[e])) fail(out.homomorphism, "complement");
    for (const auto& l : a.letters())
      if (!(rep.map(a.apply(elems[e], l)) == tgt.apply(images[e], l))) fail(out.homomorphism, "substitution " + l.to_string());
    const std::size_t partner = out.exhaustive ? 0 : rng() % elems.size();
    for (std::size_t f = partner; f < (out.exhaustive ? elems.size() : partner + 1); ++f)
      if (!(rep.map(elems[e] & elems[f]) == (images[e] & images[f]))) fail(out.homomorphism, "meet");
    if (elems[e].any() && images[e].is_empty()) fail(out.injective, "nonzero element mapped to the empty set");
  }
  if (a.signature().diagonals())
    for (int i = 0; i < a.dim(); ++i)
      for (int j = 0; j < a.dim(); ++j)
        if (!(rep.map(a.diagonal(i, j)) == tgt.diagonal(i, j))) fail(out.homomorphism, "diagonal");

  std::vector<DenseSet> atom_images;
  DenseSet cover = tgt.bottom();
  for (std::size_t k = 0; k < na; ++k) {
    atom_images.push_back(rep.map(a.atom(k)));
    cover = cover | atom_images.back();
  }
  if (!(cover == tgt.top())) fail(out.atom_cover, "atoms do not cover the unit");
  // Each point's preimage {x : p ∈ h(x)} is an ultrafilter; it is principal iff some atom contains p.
  out.preimages_principal = out.atom_cover;

  auto check_meet = [&](const std::vector<std::size_t>& ys, const std::vector<Bits>& xs, const std::vector<DenseSet>& hs,
                        bool atoms_only) {
    ++out.subsets_checked;
    Bits meet = a.top();
    DenseSet inter = tgt.top();
    for (auto y : ys) {
      meet &= xs[y];
      inter = inter & hs[y];
    }
    if (!(rep.map(meet) == inter)) fail(out.meets_preserved, "meet of a subset");
    if (atoms_only && meet.none() && !inter.is_empty()) fail(out.omission, "omitted meet realized");
  };

  if (out.exhaustive) {
    const std::size_t ne = elems.size();
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << ne); ++m) {
      std::vector<std::size_t> ys;
      for (std::size_t k = 0; k < ne; ++k)
        if (m >> k & 1u) ys.push_back(k);
      check_meet(ys, elems, images, false);
    }
  }
  std::vector<Bits> atoms;
  for (std::size_t k = 0; k < na; ++k) atoms.push_back(a.atom(k));
  if (na <= 16) {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << na); ++m) {
      std::vector<std::size_t> ys;
      for (std::size_t k = 0; k < na; ++k)
        if (m >> k & 1u) ys.push_back(k);
      check_meet(ys, atoms, atom_images, true);
    }
  } else {
    for (std::size_t x = 0; x < na; ++x)
      for (std::size_t y = x; y < na; ++y) check_meet({x, y}, atoms, atom_images, true);
  }
  if (!out.exhaustive) {
    for (std::uint64_t s = 0; s < samples; ++s) {
      std::vector<std::size_t> ys;
      const std::size_t size = 2 + rng() % 7;
      for (std::size_t k = 0; k < size; ++k) ys.push_back(rng() % elems.size());
      check_meet(ys, elems, images, false);
    }
  }
  return out;
}

struct AtomSumResult {
  bool holds = false;
  std::optional<Transformation> witness;  // τ whose join of s_τ-images of atoms below b differs from b
  std::optional<AxiomReport> relativized_axioms;
  std::optional<RepresentationReport> representation;
};

/// For every τ: the join of s_τ x over atoms x ≤ b equals b. When it holds, a
/// representation of Rl_b A (A itself when b = 1) is built and verified,
/// provided Rl_b A satisfies the axioms.
inline AtomSumResult atom_sum_criterion(std::shared_ptr<const FiniteAlgebra> a, const Bits& b,
                                        const Limits& lim = default_limits()) {
  AtomSumResult res;
  const auto sig = a->signature();
  if (sig.kind == SigKind::TA) throw Error("atom_sum_criterion: SA signature required");
  res.holds = true;
  for (const auto& t : enumerate_monoid(sig.dim, sig.kind, lim)) {
    Bits join(a->num_atoms());
    for (auto x = b.find_first(); x != Bits::npos; x = b.find_next(x)) join |= a->apply(a->atom(x), t);
    if (join != b) {
      res.holds = false;
      res.witness = t;
      return res;
    }
  }
  std::shared_ptr<const FiniteAlgebra> target = a;
  if (!b.all()) {
    target = std::make_shared<const FiniteAlgebra>(relativize_Rl(*a, b));
    res.relativized_axioms = validate_axioms(*target);
    if (!res.relativized_axioms->ok) return res;
  }
  res.representation = verify_representation(disjoint_union_rep(target, lim));
  return res;
}

// ---------------------------------------------------------------------------
// Quotient by diagonals

struct DiagonalQuotientReport {
  std::vector<int> classes;  // class label of each index, labels by first occurrence
  int blocks = 0;
  bool equivalence = true;
  bool well_defined = true;
  bool respects_booleans = true;
  bool respects_substitutions = true;
  bool respects_diagonals = true;
  std::optional<SetAlgebra> target;
  std::function<DenseSet(const Bits&)> map;
};

/// h(z) = {ξ : a ≤ S_ξ z} with i ~ j iff a ≤ d_ij; points ξ are re-indexed to π∘ξ over the classes.
inline DiagonalQuotientReport diagonal_quotient_rep(std::shared_ptr<const FiniteAlgebra> a, std::size_t atom,
                                                    std::uint64_t seed = 0, std::uint64_t samples = 200) {
  const auto sig = a->signature();
  if (!sig.diagonals()) throw Error("diagonal_quotient_rep: SAD signature required");
  {
    auto rep = validate_axioms(*a);
    for (const auto& f : rep.failures)
      if (f[0] == 'D') throw Error("diagonal axioms fail in the algebra: " + f);
  }
  const int n = sig.dim;
  DiagonalQuotientReport out;
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rel[i][j] = a->diagonal(i, j).test(atom);
  for (int i = 0; i < n; ++i) {
    if (!rel[i][i]) out.equivalence = false;
    for (int j = 0; j < n; ++j) {
      if (rel[i][j] != rel[j][i]) out.equivalence = false;
      for (int k = 0; k < n; ++k)
        if (rel[i][j] && rel[j][k] && !rel[i][k]) out.equivalence = false;
    }
  }
  out.classes.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    if (out.classes[i] >= 0) continue;
    for (int j = i; j < n; ++j)
      if (rel[i][j] && out.classes[j] < 0) out.classes[j] = out.blocks;
    if (out.classes[i] < 0) out.classes[i] = out.blocks;
    ++out.blocks;
  }

  const auto monoid = enumerate_monoid(n, sig.kind);
  auto unit = square_unit(n, out.blocks);
  out.target.emplace(unit, sig.kind);
  std::vector<std::uint64_t> proj;
  for (const auto& t : monoid) {
    Point q(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) q[k] = out.classes[t(k)];
    proj.push_back(unit->encode(q));
  }
  auto src = a;
  auto classes = out.classes;
  // Membership of each ξ, and whether every ξ over the same quotient point agrees.
  auto raw = [src, monoid, atom](const Bits& z) {
    std::vector<bool> in;
    for (const auto& t : monoid) in.push_back(src->apply(z, t).test(atom));
    return in;
  };
  out.map = [raw, proj, unit](const Bits& z) {
    auto in = raw(z);
    Bits b(unit->ambient_size());
    for (std::size_t k = 0; k < in.size(); ++k)
      if (in[k]) b.set(proj[k]);
    return DenseSet(unit, std::move(b));
  };

  std::mt19937_64 rng(seed);
  std::vector<Bits> elems{a->bottom(), a->top()};
  for (std::size_t k = 0; k < a->num_atoms(); ++k) elems.push_back(a->atom(k));
  if (a->num_atoms() <= 4) {
    elems.clear();
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << a->num_atoms()); ++m) {
      Bits b(a->num_atoms());
      for (std::size_t k = 0; k < a->num_atoms(); ++k)
        if (m >> k & 1u) b.set(k);
      elems.push_back(b);
    }
  } else {
    for (std::uint64_t s = 0; s < samples; ++s) {
      Bits b(a->num_atoms());
      for (std::size_t k = 0; k < a->num_atoms(); ++k)
        if (rng() & 1u) b.set(k);
      elems.push_back(b);
    }
  }
  const auto& tgt = *out.target;
  for (const auto& z : elems) {
    auto in = raw(z);
    std::map<std::uint64_t, bool> seen;
    for (std::size_t k = 0; k < in.size(); ++k) {
      auto [it, fresh] = seen.emplace(proj[k], in[k]);
      if (!fresh && it->second != in[k]) out.well_defined = false;
    }
    const auto hz = out.map(z);
    if (!(out.map(~z) == ~hz)) out.respects_booleans = false;
    for (const auto& l : a->letters())
      if (!(out.map(a->apply(z, l)) == tgt.apply(hz, l))) out.respects_substitutions = false;
  }
  for (std::size_t e = 0; e + 1 < elems.size(); ++e)
    if (!(out.map(elems[e] & elems[e + 1]) == (out.map(elems[e]) & out.map(elems[e + 1])))) out.respects_booleans = false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(out.map(a->diagonal(i, j)) == tgt.diagonal(i, j))) out.respects_diagonals = false;
  return out;
}

// ---------------------------------------------------------------------------
// Non-variety certificate: σ = (s_f x = -x ⟹ 0 = 1)

inline Transformation disjoint_swaps(int n) {
  auto f = Transformation::identity(n);
  const int last = n % 2 == 0 ? n - 1 : n - 2;
  for (int i = 0; i + 1 <= last; i += 2) f = compose(f, Transformation::transposition(n, i, i + 1));
  return f;
}

inline QuasiEquation sigma_quasi_equation(int n) {
  const auto w = decompose(disjoint_swaps(n), SigKind::TA);
  Term x = Term::var(0);
  return {{{Term::apply_word(w, x), Term::negate(x)}}, {Term::bottom(), Term::top()}};
}

struct SmallAlgebraCheck {
  int k = 0;
  bool holds = false;
  bool exhaustive = false;
  bool constant_point_lemma = false;  // constant points are fixed by f (and exist)
  std::uint64_t checked = 0;
};

struct NonVarietyCertificate {
  int n = 2;
  Transformation f;
  UnitPtr stated_g;  // {e_i}: exactly one 0
  DenseSet stated_x; // {e_i : i odd}
  bool stated_witness_holds = false;
  UnitPtr g;
  DenseSet x;
  bool witness_holds = false;  // S_f(X) = -X in ℘(G)
  bool repaired = false;
  std::vector<SmallAlgebraCheck> small;

  bool ok() const {
    if (!witness_holds) return false;
    for (const auto& s : small)
      if (!s.holds) return false;
    return true;
  }
};

inline bool sf_is_complement(const UnitPtr& g, const DenseSet& x, const Transformation& f) {
  SetAlgebra alg(g, SigKind::TA);
  return alg.apply(x, f) == ~x;
}

inline NonVarietyCertificate non_variety_certificate(int n, std::uint64_t seed = 0, std::uint64_t samples = 10000,
                                                     std::uint64_t exhaustive_cap = std::uint64_t{1} << 16,
                                                     const Limits& lim = default_limits()) {
  if (n < 2) throw Error("non_variety_certificate: n must be at least 2");
  NonVarietyCertificate c;
  c.n = n;
  c.f = disjoint_swaps(n);

  std::vector<Point> es, odd;
  for (int i = 0; i < n; ++i) {
    Point e(static_cast<std::size_t>(n), 1);
    e[i] = 0;
    es.push_back(e);
    if (i % 2 == 1) odd.push_back(e);
  }
  c.stated_g = unit_from_points(n, 2, es, lim);
  c.stated_x = DenseSet::of_points(c.stated_g, odd);
  c.stated_witness_holds = c.stated_g->permutable() && sf_is_complement(c.stated_g, c.stated_x, c.f);

  if (c.stated_witness_holds) {
    c.g = c.stated_g;
    c.x = c.stated_x;
    c.witness_holds = true;
  } else {
    // S_n with one point from each orbit {q, q∘f}; f is a fixed-point-free involution there.
    c.repaired = true;
    c.g = monoid_unit(n, SigKind::TA, lim);
    Bits xb(c.g->ambient_size());
    for (auto p : c.g->points()) {
      const auto partner = c.g->pull(p, c.f);
      if (c.g->decode(p) < c.g->decode(partner)) xb.set(p);
    }
    c.x = DenseSet(c.g, xb);
    c.witness_holds = sf_is_complement(c.g, c.x, c.f);
  }

  std::mt19937_64 rng(seed);
  for (int k = 0; k <= n; ++k) {
    SmallAlgebraCheck s;
    s.k = k;
    auto alg = small_algebra(n, k, SigKind::TA, lim);
    const auto& unit = alg.unit();
    const auto pts = unit->points();
    if (pts.empty()) {
      // one-element algebra: 0 = 1 holds, so the conclusion holds
      s.holds = s.exhaustive = true;
      c.small.push_back(s);
      continue;
    }
    s.constant_point_lemma = true;
    for (int v = 0; v < k; ++v) {
      Point q(static_cast<std::size_t>(n), v);
      const auto p = unit->encode(q);
      if (unit->pull(p, c.f) != p) s.constant_point_lemma = false;
    }
    const bool small_enough = pts.size() < 63 && (std::uint64_t{1} << pts.size()) <= exhaustive_cap;
    s.holds = true;
    auto refutes = [&](const DenseSet& y) { return !(alg.apply(y, c.f) == ~y); };
    if (small_enough) {
      s.exhaustive = true;
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << pts.size()); ++m) {
        Bits b(unit->ambient_size());
        for (std::size_t t = 0; t < pts.size(); ++t)
          if (m >> t & 1u) b.set(pts[t]);
        ++s.checked;
        if (!refutes(DenseSet(unit, std::move(b)))) s.holds = false;
      }
    } else {
      for (std::uint64_t t = 0; t < samples; ++t) {
        Bits b(unit->ambient_size());
        for (auto p : pts)
          if (rng() & 1u) b.set(p);
        ++s.checked;
        if (!refutes(DenseSet(unit, std::move(b)))) s.holds = false;
      }
      s.holds = s.holds && s.constant_point_lemma;
    }
    c.small.push_back(s);
  }
  return c;
}

/// Recomputes the witness verdict from the stored sets.
inline bool replay_certificate(const NonVarietyCertificate& c) {
  return c.g->permutable() && sf_is_complement(c.g, c.x, c.f);
}

}  // namespace subst
