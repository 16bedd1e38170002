#pragma once

// Independent reference implementations. Nothing here uses the library's
// bitsets, normal forms or compiled tables: sets are std::set of sequences
// and every operation is computed from its definition.

#include "subst/term.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <vector>

namespace oracle {

using Seq = std::vector<int>;
using SeqSet = std::set<Seq>;

/// (a∘b)(k) = a(b(k)).
inline Seq compose(const Seq& a, const Seq& b) {
  Seq c(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) c[k] = a[static_cast<std::size_t>(b[k])];
  return c;
}

inline Seq identity(int n) {
  Seq s(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) s[k] = k;
  return s;
}

inline Seq letter_map(const subst::Letter& l, int n) {
  Seq s = identity(n);
  if (l.is_transpose()) std::swap(s[l.i], s[l.j]);
  else s[l.i] = l.j;
  return s;
}

inline Seq word_map(const subst::SubstWord& w) {
  Seq s = identity(w.dim);
  for (const auto& l : w.letters) s = compose(s, letter_map(l, w.dim));
  return s;
}

/// Closure of the identity under right multiplication by the letters.
inline std::set<Seq> monoid(int n, const std::vector<subst::Letter>& letters) {
  std::set<Seq> seen{identity(n)};
  std::vector<Seq> frontier{identity(n)};
  while (!frontier.empty()) {
    std::vector<Seq> next;
    for (const auto& s : frontier)
      for (const auto& l : letters) {
        auto t = compose(s, letter_map(l, n));
        if (seen.insert(t).second) next.push_back(t);
      }
    frontier = std::move(next);
  }
  return seen;
}

/// All sequences in ^n base, in lexicographic order.
inline std::vector<Seq> all_sequences(int n, int base) {
  std::vector<Seq> out;
  if (base == 0) return out;
  Seq s(static_cast<std::size_t>(n), 0);
  while (true) {
    out.push_back(s);
    int k = n - 1;
    while (k >= 0 && s[k] == base - 1) s[k--] = 0;
    if (k < 0) break;
    ++s[k];
  }
  return out;
}

struct Algebra {
  int n = 2;
  SeqSet unit;
};

inline Algebra square(int n, int base) {
  auto all = all_sequences(n, base);
  return {n, SeqSet(all.begin(), all.end())};
}

/// S_t X = {q ∈ V : q∘t ∈ X}.
inline SeqSet subst(const Algebra& a, const Seq& t, const SeqSet& x) {
  SeqSet out;
  for (const auto& q : a.unit)
    if (x.count(compose(q, t))) out.insert(q);
  return out;
}

inline SeqSet diagonal(const Algebra& a, int i, int j) {
  SeqSet out;
  for (const auto& q : a.unit)
    if (q[i] == q[j]) out.insert(q);
  return out;
}

inline SeqSet complement(const Algebra& a, const SeqSet& x) {
  SeqSet out;
  for (const auto& q : a.unit)
    if (!x.count(q)) out.insert(q);
  return out;
}

inline SeqSet eval(const subst::Term& t, const std::vector<SeqSet>& asg, const Algebra& a) {
  using K = subst::Term::Kind;
  switch (t.kind()) {
    case K::Var: return asg.at(static_cast<std::size_t>(t.index()));
    case K::Top: return a.unit;
    case K::Bottom: return {};
    case K::Diag: return diagonal(a, t.diag_i(), t.diag_j());
    case K::Not: return complement(a, eval(t.child(), asg, a));
    case K::And: {
      auto l = eval(t.left(), asg, a), r = eval(t.right(), asg, a);
      SeqSet out;
      for (const auto& q : l)
        if (r.count(q)) out.insert(q);
      return out;
    }
    case K::Or: {
      auto l = eval(t.left(), asg, a), r = eval(t.right(), asg, a);
      l.insert(r.begin(), r.end());
      return l;
    }
    case K::Subst: return subst(a, letter_map(t.letter(), a.n), eval(t.child(), asg, a));
  }
  return {};
}

inline std::vector<SeqSet> subsets(const SeqSet& unit) {
  std::vector<Seq> pts(unit.begin(), unit.end());
  std::vector<SeqSet> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << pts.size()); ++m) {
    SeqSet s;
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (m >> k & 1u) s.insert(pts[k]);
    out.push_back(std::move(s));
  }
  return out;
}

/// Calls `f` on every assignment of subsets of the unit to `nvars` variables; stops when f returns false.
inline void for_each_assignment(const Algebra& a, int nvars, const std::function<bool(const std::vector<SeqSet>&)>& f) {
  const auto subs = subsets(a.unit);
  std::vector<std::size_t> idx(static_cast<std::size_t>(nvars), 0);
  std::vector<SeqSet> asg(static_cast<std::size_t>(nvars));
  while (true) {
    for (int v = 0; v < nvars; ++v) asg[v] = subs[idx[v]];
    if (!f(asg)) return;
    int v = 0;
    while (v < nvars && ++idx[v] == subs.size()) idx[v++] = 0;
    if (v == nvars) return;
  }
}

inline int var_count(const subst::QuasiEquation& qe) {
  auto vs = subst::vars_of(qe);
  return vs.empty() ? 0 : *vs.rbegin() + 1;
}

/// Quasi-equation holds in `a` under every assignment.
inline bool holds(const subst::QuasiEquation& qe, const Algebra& a) {
  bool ok = true;
  for_each_assignment(a, var_count(qe), [&](const std::vector<SeqSet>& asg) {
    for (const auto& p : qe.premises)
      if (eval(p.lhs, asg, a) != eval(p.rhs, asg, a)) return true;
    if (eval(qe.conclusion.lhs, asg, a) != eval(qe.conclusion.rhs, asg, a)) ok = false;
    return ok;
  });
  return ok;
}

inline bool holds(const subst::Equation& eq, const Algebra& a) { return holds(subst::QuasiEquation{{}, eq}, a); }

/// Pointwise Kripke satisfaction: the l-successor of q is q∘l.
inline bool sat(const subst::Formula& f, const Seq& q, const std::map<int, SeqSet>& val, int n) {
  using K = subst::Formula::Kind;
  switch (f.kind()) {
    case K::Prop: {
      auto it = val.find(f.index());
      return it != val.end() && it->second.count(q);
    }
    case K::True: return true;
    case K::False: return false;
    case K::Diag: return q[f.diag_i()] == q[f.diag_j()];
    case K::Not: return !sat(f.child(), q, val, n);
    case K::And: return sat(f.left(), q, val, n) && sat(f.right(), q, val, n);
    case K::Or: return sat(f.left(), q, val, n) || sat(f.right(), q, val, n);
    case K::Implies: return !sat(f.left(), q, val, n) || sat(f.right(), q, val, n);
    case K::Iff: return sat(f.left(), q, val, n) == sat(f.right(), q, val, n);
    case K::Diamond:
    case K::Box: return sat(f.child(), compose(q, letter_map(f.letter(), n)), val, n);
  }
  return false;
}

/// Number of nonempty minterms of the free algebra on `gens` generators over the monoid M:
/// a minterm picks, for each τ in M, whether the identity lies in S_τ X.
/// Realizable iff X can be chosen as {τ : picked}; checked by brute force over all X ⊆ M.
inline std::uint64_t free_atom_count(int n, const std::vector<subst::Letter>& letters, int gens) {
  const auto m = monoid(n, letters);
  std::vector<Seq> elems(m.begin(), m.end());
  Algebra a{n, SeqSet(m.begin(), m.end())};
  std::set<std::vector<bool>> realized;
  const auto subs = subsets(a.unit);
  std::vector<std::size_t> idx(static_cast<std::size_t>(gens), 0);
  while (true) {
    std::vector<bool> row;
    for (int g = 0; g < gens; ++g)
      for (const auto& t : elems) row.push_back(subst(a, t, subs[idx[g]]).count(identity(n)) > 0);
    realized.insert(row);
    int g = 0;
    while (g < gens && ++idx[g] == subs.size()) idx[g++] = 0;
    if (g == gens) break;
  }
  return realized.size();
}

}  // namespace oracle
