#pragma once

// Kripke models over a unit: states are the unit's points, and the
// accessibility relation tagged by a letter l is the function s ↦ s∘l.

#include "subst/core.hpp"
#include "subst/decision.hpp"
#include "subst/set_algebra.hpp"
#include "subst/term.hpp"

#include <map>
#include <string>
#include <utility>

namespace subst {

struct KripkeModel {
  UnitPtr unit;
  SigKind kind = SigKind::TA;
  std::map<int, DenseSet> valuation;  // p_i ↦ set of states

  int dim() const { return unit->dim(); }
};

/// Pointwise satisfaction; unvalued propositions are false everywhere.
inline bool satisfies(const KripkeModel& m, std::uint64_t w, const Formula& f) {
  if (!m.unit->contains(w)) throw Error("satisfies: state outside the unit");
  switch (f.kind()) {
    case Formula::Kind::Prop: {
      auto it = m.valuation.find(f.index());
      return it != m.valuation.end() && it->second.contains(w);
    }
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Diag: {
      const auto q = m.unit->decode(w);
      return q[f.diag_i()] == q[f.diag_j()];
    }
    case Formula::Kind::Not: return !satisfies(m, w, f.child());
    case Formula::Kind::And: return satisfies(m, w, f.left()) && satisfies(m, w, f.right());
    case Formula::Kind::Or: return satisfies(m, w, f.left()) || satisfies(m, w, f.right());
    case Formula::Kind::Implies: return !satisfies(m, w, f.left()) || satisfies(m, w, f.right());
    case Formula::Kind::Iff: return satisfies(m, w, f.left()) == satisfies(m, w, f.right());
    case Formula::Kind::Diamond:
    case Formula::Kind::Box: {
      // the successor exists and is unique, so both modalities test it
      const auto t = m.unit->pull(w, f.letter().value(m.dim()));
      return satisfies(m, t, f.child());
    }
  }
  throw Error("satisfies: unknown formula kind");
}

inline bool satisfies(const KripkeModel& m, const Point& w, const Formula& f) {
  return satisfies(m, m.unit->encode(w), f);
}

inline DenseSet formula_extension(const KripkeModel& m, const Formula& f) {
  Bits b(m.unit->ambient_size());
  for (auto w : m.unit->points())
    if (satisfies(m, w, f)) b.set(w);
  return DenseSet(m.unit, std::move(b));
}

/// The valuation as a term assignment, for comparison with eval_term.
inline Assignment assignment_of(const KripkeModel& m, int nvars) {
  Assignment a(static_cast<std::size_t>(nvars), DenseSet::empty(m.unit));
  for (const auto& [i, x] : m.valuation)
    if (i < nvars) a[i] = x;
  return a;
}

/// A Kripke model falsifying `f` at the returned state, from an invalid verdict.
inline std::pair<KripkeModel, Point> countermodel_to_kripke(const ValidityResult& r, const Formula& f) {
  if (!r.invalid() || !r.countermodel) throw Error("countermodel_to_kripke: verdict has no countermodel");
  const auto& cm = *r.countermodel;
  KripkeModel m{cm.unit, cm.kind, {}};
  for (std::size_t i = 0; i < cm.assignment.size(); ++i) {
    const auto& x = cm.assignment[i];
    if (!x.unit() || !(*x.unit() == *cm.unit)) throw Error("countermodel_to_kripke: malformed certificate");
    m.valuation.emplace(static_cast<int>(i), x);
  }
  if (satisfies(m, cm.witness, f)) throw Error("countermodel_to_kripke: certificate does not falsify the formula");
  return {std::move(m), cm.witness};
}

}  // namespace subst
