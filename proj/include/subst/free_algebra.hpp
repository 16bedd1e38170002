#pragma once

// Free algebras Fr_m of TA_n / SA_n held intensionally: an element is a
// Boolean function over the alphabet of decorated generators s_τ x_i.
// Also uniform interpolants by existential elimination.

#include "subst/core.hpp"
#include "subst/decision.hpp"
#include "subst/normal_form.hpp"
#include "subst/perm.hpp"
#include "subst/set_algebra.hpp"
#include "subst/term.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace subst {

using BigInt = boost::multiprecision::cpp_int;

/// Elements are NormalForms over the full alphabet (unreduced).
struct FreeAlgebra {
  Signature sig;
  int gens = 1;
  std::vector<DecoratedVar> alphabet;  // sorted: generator index, then τ lexicographic

  std::size_t size_log2_log2() const { return alphabet.size(); }
};

inline FreeAlgebra build_free(Signature sig, int m, const Limits& lim = default_limits()) {
  if (m < 1) throw Error("free algebra needs at least one generator");
  if (sig.diagonals()) throw Error("free algebras are built for TA and SA only");
  const auto monoid = enumerate_monoid(sig.dim, sig.kind, lim);
  if (monoid.size() * static_cast<std::size_t>(m) > lim.max_alphabet)
    throw BudgetExceeded("free algebra alphabet of " + std::to_string(monoid.size() * m) + " exceeds the cap of " +
                         std::to_string(lim.max_alphabet));
  FreeAlgebra h{sig, m, {}};
  for (int i = 0; i < m; ++i)
    for (const auto& t : monoid) h.alphabet.push_back(DecoratedVar::of(t, i));
  return h;
}

inline NormalForm free_element(const FreeAlgebra& h, const Term& t) {
  for (int v : vars_of(t))
    if (v >= h.gens) throw Error("term uses x" + std::to_string(v) + " beyond the " + std::to_string(h.gens) + " generators");
  if (has_diagonal(t)) throw Error("free algebra terms cannot use diagonals");
  return extend_to(normalize(t, h.sig), h.alphabet);
}

inline NormalForm free_generator(const FreeAlgebra& h, int i) { return free_element(h, Term::var(i)); }

inline NormalForm subst_action(const FreeAlgebra& h, const NormalForm& e, const Transformation& t) {
  if (!h.sig.replacements() && !t.is_permutation()) throw Error("subst_action: " + t.to_string() + " is not in S_n");
  return extend_to(act(e, t), h.alphabet);
}

/// Minterm `row` is nonzero: under X_i = {τ : bit (τ,i) set} in ℘(S_n) or ℘(^nn),
/// the identity point lies in S_τ X_i exactly for the set bits. Computed through
/// the set-algebra operations, not through the normal form.
inline bool minterm_realized(const FreeAlgebra& h, std::uint64_t row, const SetAlgebra& alg) {
  const auto& unit = alg.unit();
  std::vector<Bits> xs(static_cast<std::size_t>(h.gens), Bits(unit->ambient_size()));
  for (std::size_t v = 0; v < h.alphabet.size(); ++v)
    if (row >> v & 1u) xs[h.alphabet[v].var].set(unit->encode(as_point(h.alphabet[v].tau)));
  const auto id = unit->encode(as_point(Transformation::identity(h.sig.dim)));
  for (std::size_t v = 0; v < h.alphabet.size(); ++v) {
    const auto& dv = h.alphabet[v];
    const bool in = alg.apply(DenseSet(unit, xs[dv.var]), dv.tau).contains(id);
    if (in != static_cast<bool>(row >> v & 1u)) return false;
  }
  return true;
}

struct FreeStats {
  std::size_t alphabet = 0;
  std::uint64_t atoms = 0;     // realized minterms
  BigInt cardinality;          // 2^atoms
  bool exhaustive = false;     // every minterm checked
  std::uint64_t checked = 0;
  std::uint64_t unrealized = 0;
  BigInt stated_bound;        // 2^(m·|monoid|)
};

inline FreeStats free_stats(const FreeAlgebra& h, std::uint64_t seed = 0, std::size_t exhaustive_cap = 12,
                            std::uint64_t samples = 1000) {
  FreeStats s;
  s.alphabet = h.alphabet.size();
  const SetAlgebra alg(monoid_unit(h.sig.dim, h.sig.kind), h.sig.kind);
  const std::uint64_t total = std::uint64_t{1} << s.alphabet;
  s.exhaustive = s.alphabet <= exhaustive_cap;
  if (s.exhaustive) {
    for (std::uint64_t r = 0; r < total; ++r) {
      ++s.checked;
      if (minterm_realized(h, r, alg)) ++s.atoms;
      else ++s.unrealized;
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
    for (std::uint64_t k = 0; k < samples; ++k) {
      ++s.checked;
      if (!minterm_realized(h, pick(rng), alg)) ++s.unrealized;
    }
    s.atoms = s.unrealized == 0 ? total : 0;
  }
  s.cardinality = BigInt(1) << static_cast<unsigned>(std::min<std::uint64_t>(s.atoms, 1u << 24));
  s.stated_bound = BigInt(1) << static_cast<unsigned>(s.alphabet);
  return s;
}

/// Atoms of Fr_m in minterm order, as normal forms over the alphabet.
inline std::vector<NormalForm> free_atoms(const FreeAlgebra& h) {
  std::vector<NormalForm> out;
  const std::uint64_t total = std::uint64_t{1} << h.alphabet.size();
  for (std::uint64_t r = 0; r < total; ++r) {
    Bits t(total);
    t.set(r);
    out.push_back({h.alphabet, std::move(t)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Interpolation

struct InterpolationResult {
  Term interpolant;
  std::set<int> shared;
  ValidityResult lower;  // a & ~b = 0
  ValidityResult upper;  // b & ~c = 0
};

class PremiseNotValid : public Error {
 public:
  PremiseNotValid(ValidityResult r) : Error("premise a <= c is not valid"), result_(std::move(r)) {}
  const ValidityResult& result() const { return result_; }

 private:
  ValidityResult result_;
};

inline Equation below(const Term& a, const Term& b) { return {Term::conj(a, Term::negate(b)), Term::bottom()}; }

/// Uniform interpolant of a over the shared vocabulary (default: vars(a) ∩ vars(c)).
inline InterpolationResult interpolate(const Term& a, const Term& c, Signature sig,
                                       std::optional<std::set<int>> shared = std::nullopt,
                                       const DecideOptions& opt = {}) {
  if (sig.diagonals() || has_diagonal(a) || has_diagonal(c))
    throw Error("interpolation is implemented for the diagonal-free signatures TA and SA");
  auto premise = decide_equation(below(a, c), sig, opt);
  if (premise.status == Status::Unknown) throw BudgetExceeded("premise check: " + premise.note);
  if (!premise.valid()) throw PremiseNotValid(std::move(premise));

  InterpolationResult res;
  if (shared) {
    res.shared = *shared;
  } else {
    auto va = vars_of(a), vc = vars_of(c);
    std::set_intersection(va.begin(), va.end(), vc.begin(), vc.end(), std::inserter(res.shared, res.shared.end()));
  }
  auto nf = exists(normalize(a, sig, opt.limits),
                   [&](const DecoratedVar& v) { return !v.is_diag() && !res.shared.count(v.var); });
  res.interpolant = term_of_normal_form(nf, sig.kind);
  res.lower = decide_equation(below(a, res.interpolant), sig, opt);
  res.upper = decide_equation(below(res.interpolant, c), sig, opt);
  return res;
}

}  // namespace subst
