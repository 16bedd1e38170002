#pragma once

// Seeded random terms, formulas and equations for property tests.

#include "subst/perm.hpp"
#include "subst/term.hpp"

#include <random>
#include <tuple>
#include <vector>

namespace gen {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline subst::Letter letter(Rng& rng, subst::Signature sig) {
  const auto letters = subst::generator_letters(sig.dim, sig.kind);
  return letters[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(letters.size()) - 1))];
}

inline subst::Term term(Rng& rng, subst::Signature sig, int nvars, int depth) {
  using subst::Term;
  if (depth <= 0 || pick(rng, 0, 9) < 2) {
    const int r = pick(rng, 0, 11);
    if (r == 0) return Term::top();
    if (r == 1) return Term::bottom();
    if (r == 2 && sig.diagonals()) {
      int i = pick(rng, 0, sig.dim - 1), j = pick(rng, 0, sig.dim - 1);
      return Term::diag(i, j);
    }
    return Term::var(pick(rng, 0, nvars - 1));
  }
  switch (pick(rng, 0, 4)) {
    case 0: return Term::negate(term(rng, sig, nvars, depth - 1));
    case 1: return Term::conj(term(rng, sig, nvars, depth - 1), term(rng, sig, nvars, depth - 1));
    case 2: return Term::disj(term(rng, sig, nvars, depth - 1), term(rng, sig, nvars, depth - 1));
    default: return Term::subst(letter(rng, sig), term(rng, sig, nvars, depth - 1));
  }
}

/// Half the time the right side is a rewrite of the left that is likely (not certainly) equal.
inline subst::Equation equation(Rng& rng, subst::Signature sig, int nvars, int depth) {
  using subst::Term;
  auto l = term(rng, sig, nvars, depth);
  if (pick(rng, 0, 1)) return {l, term(rng, sig, nvars, depth)};
  switch (pick(rng, 0, 3)) {
    case 0: return {Term::negate(Term::negate(l)), l};
    case 1: {
      auto a = letter(rng, sig);
      return {Term::subst(a, Term::negate(l)), Term::negate(Term::subst(a, l))};
    }
    case 2: {
      auto a = letter(rng, sig);
      auto r = term(rng, sig, nvars, depth / 2);
      return {Term::subst(a, Term::disj(l, r)), Term::disj(Term::subst(a, l), Term::subst(a, r))};
    }
    default: {
      auto a = letter(rng, sig);
      return {Term::subst(a, Term::subst(a, l)), l};
    }
  }
}

inline subst::Formula formula(Rng& rng, subst::Signature sig, int nprops, int depth) {
  using subst::Formula;
  if (depth <= 0 || pick(rng, 0, 9) < 2) {
    const int r = pick(rng, 0, 9);
    if (r == 0) return Formula::truth();
    if (r == 1) return Formula::falsity();
    if (r == 2 && sig.diagonals()) return Formula::diag(pick(rng, 0, sig.dim - 1), pick(rng, 0, sig.dim - 1));
    return Formula::prop(pick(rng, 0, nprops - 1));
  }
  switch (pick(rng, 0, 7)) {
    case 0: return Formula::negate(formula(rng, sig, nprops, depth - 1));
    case 1: return Formula::conj(formula(rng, sig, nprops, depth - 1), formula(rng, sig, nprops, depth - 1));
    case 2: return Formula::disj(formula(rng, sig, nprops, depth - 1), formula(rng, sig, nprops, depth - 1));
    case 3: return Formula::implies(formula(rng, sig, nprops, depth - 1), formula(rng, sig, nprops, depth - 1));
    case 4: return Formula::iff(formula(rng, sig, nprops, depth - 1), formula(rng, sig, nprops, depth - 1));
    case 5: return Formula::box(letter(rng, sig), formula(rng, sig, nprops, depth - 1));
    default: return Formula::diamond(letter(rng, sig), formula(rng, sig, nprops, depth - 1));
  }
}

inline subst::SubstWord word(Rng& rng, subst::Signature sig, int max_len) {
  subst::SubstWord w{sig.dim, {}};
  const int len = pick(rng, 0, max_len);
  for (int k = 0; k < len; ++k) w.letters.push_back(letter(rng, sig));
  return w;
}

/// Replaces x_k by x_to[k].
inline subst::Term rename(const subst::Term& t, const std::vector<int>& to) {
  using subst::Term;
  switch (t.kind()) {
    case Term::Kind::Var: return Term::var(to.at(static_cast<std::size_t>(t.index())));
    case Term::Kind::Not: return Term::negate(rename(t.child(), to));
    case Term::Kind::And: return Term::conj(rename(t.left(), to), rename(t.right(), to));
    case Term::Kind::Or: return Term::disj(rename(t.left(), to), rename(t.right(), to));
    case Term::Kind::Subst: return Term::subst(t.letter(), rename(t.child(), to));
    default: return t;
  }
}

/// A valid implication a <= c with a = s & a', c = s | c', where s is over {x1} and
/// mentions x1, a' is over {x0,x1} and c' over {x1,x2}. Returns {a, c, s}.
inline std::tuple<subst::Term, subst::Term, subst::Term> split_implication(Rng& rng, subst::Signature sig) {
  using subst::Term;
  auto r = rename(term(rng, sig, 1, 3), {1});
  auto s = pick(rng, 0, 1) ? Term::conj(Term::var(1), r) : Term::disj(Term::subst(letter(rng, sig), Term::var(1)), r);
  auto a = Term::conj(s, Term::conj(Term::var(0), rename(term(rng, sig, 2, 2), {0, 1})));
  auto c = Term::disj(s, Term::disj(Term::var(2), rename(term(rng, sig, 2, 2), {1, 2})));
  return {a, c, s};
}

}  // namespace gen
