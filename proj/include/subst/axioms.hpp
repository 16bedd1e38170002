#pragma once

// Axiom instances for a signature and compositional evaluation of terms in
// concrete set algebras.

#include "subst/core.hpp"
#include "subst/perm.hpp"
#include "subst/set_algebra.hpp"
#include "subst/term.hpp"

#include <string>
#include <vector>

namespace subst {

struct AxiomInstance {
  std::string schema;  // "B1".."B9", "2", "3", word-relation ids, "D1".."D4"
  Equation eq;
};

/// Fixed Boolean base: commutativity and associativity of & and |, both
/// absorption laws, distributivity, complement laws.
inline std::vector<AxiomInstance> boolean_axioms() {
  const Term x = Term::var(0), y = Term::var(1), z = Term::var(2);
  using T = Term;
  return {
      {"B1", {T::conj(x, y), T::conj(y, x)}},
      {"B2", {T::disj(x, y), T::disj(y, x)}},
      {"B3", {T::conj(T::conj(x, y), z), T::conj(x, T::conj(y, z))}},
      {"B4", {T::disj(T::disj(x, y), z), T::disj(x, T::disj(y, z))}},
      {"B5", {T::conj(x, T::disj(x, y)), x}},
      {"B6", {T::disj(x, T::conj(x, y)), x}},
      {"B7", {T::conj(x, T::disj(y, z)), T::disj(T::conj(x, y), T::conj(x, z))}},
      {"B8", {T::disj(x, T::negate(x)), T::top()}},
      {"B9", {T::conj(x, T::negate(x)), T::bottom()}},
  };
}

inline std::vector<AxiomInstance> instantiate_axioms(Signature sig) {
  const int n = sig.dim;
  auto out = boolean_axioms();
  const Term x = Term::var(0), y = Term::var(1);
  for (const auto& l : generator_letters(n, sig.kind)) {
    out.push_back({"2", {Term::subst(l, Term::conj(x, y)), Term::conj(Term::subst(l, x), Term::subst(l, y))}});
    out.push_back({"3", {Term::subst(l, Term::negate(x)), Term::negate(Term::subst(l, x))}});
  }
  for (const auto& r : word_relations(n, sig.kind))
    out.push_back({r.id, {Term::apply_word({n, r.lhs}, x), Term::apply_word({n, r.rhs}, x)}});
  if (!sig.diagonals()) return out;

  for (int i = 0; i < n; ++i) out.push_back({"D1", {Term::diag(i, i), Term::top()}});
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back({"D2", {Term::diag(i, j), Term::diag(j, i)}});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (i == j || j == k || i == k) continue;
        Term lhs = Term::conj(Term::conj(Term::diag(i, k), Term::diag(k, j)), Term::diag(i, j));
        out.push_back({"D3", {lhs, Term::conj(Term::diag(i, k), Term::diag(k, j))}});
      }
  for (const auto& l : generator_letters(n, sig.kind)) {
    const auto t = l.value(n);
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m) {
        if (k == m) continue;
        out.push_back({"D4", {Term::subst(l, Term::diag(k, m)), Term::diag(t(k), t(m))}});
      }
  }
  return out;
}

/// Variable i is bound to assignment[i]; unbound entries have a null unit.
using Assignment = std::vector<DenseSet>;

inline DenseSet eval_term(const Term& t, const Assignment& asg, const SetAlgebra& alg) {
  switch (t.kind()) {
    case Term::Kind::Var: {
      const auto i = static_cast<std::size_t>(t.index());
      if (i >= asg.size() || !asg[i].unit()) throw Error("eval_term: no binding for x" + std::to_string(t.index()));
      return asg[i];
    }
    case Term::Kind::Top: return alg.top();
    case Term::Kind::Bottom: return alg.bottom();
    case Term::Kind::Diag: return alg.diagonal(t.diag_i(), t.diag_j());
    case Term::Kind::Not: return ~eval_term(t.child(), asg, alg);
    case Term::Kind::And: return eval_term(t.left(), asg, alg) & eval_term(t.right(), asg, alg);
    case Term::Kind::Or: return eval_term(t.left(), asg, alg) | eval_term(t.right(), asg, alg);
    case Term::Kind::Subst: return alg.apply(eval_term(t.child(), asg, alg), t.letter());
  }
  throw Error("eval_term: unknown term kind");
}

}  // namespace subst
