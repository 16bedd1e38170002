#pragma once

// Validity of equations and quasi-equations. Equations without diagonals are
// decided by comparing normal forms; with diagonals, by sweeping the kernel
// partitions of the witness point; quasi-equations by checking every small
// algebra A_nk, k <= n.

#include "subst/axioms.hpp"
#include "subst/core.hpp"
#include "subst/normal_form.hpp"
#include "subst/perm.hpp"
#include "subst/set_algebra.hpp"
#include "subst/term.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace subst {

enum class Status { Valid, Invalid, Unknown };
enum class Method { NormalForm, Exhaustive, Sampled, Partition };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::Valid: return "valid";
    case Status::Invalid: return "invalid";
    case Status::Unknown: return "unknown";
  }
  return "?";
}

inline std::string to_string(Method m) {
  switch (m) {
    case Method::NormalForm: return "normal-form";
    case Method::Exhaustive: return "exhaustive";
    case Method::Sampled: return "sampled";
    case Method::Partition: return "partition";
  }
  return "?";
}

/// An algebra, an assignment of its elements to x0, x1, ... and a point where the two sides differ.
struct Countermodel {
  SigKind kind = SigKind::TA;
  UnitPtr unit;
  Assignment assignment;
  Point witness;

  int dim() const { return unit->dim(); }
  int base() const { return unit->base(); }
  SetAlgebra algebra() const { return SetAlgebra(unit, kind); }
};

struct ValidityResult {
  Status status = Status::Unknown;
  Method method = Method::NormalForm;
  std::optional<Countermodel> countermodel;
  std::uint64_t seed = 0;
  std::string note;

  bool valid() const { return status == Status::Valid; }
  bool invalid() const { return status == Status::Invalid; }
  bool decided() const { return status != Status::Unknown; }
};

struct DecideOptions {
  std::uint64_t seed = 0;
  std::uint64_t budget_assignments = std::uint64_t{1} << 20;
  std::uint64_t samples = 10000;
  Limits limits{};
};

inline QuasiEquation as_quasi_equation(const Equation& eq) { return {{}, eq}; }

inline int var_bound(const QuasiEquation& qe) {
  auto vs = vars_of(qe);
  return vs.empty() ? 0 : *vs.rbegin() + 1;
}

/// Re-checks a countermodel: premises hold as equalities, the conclusion's sides differ at the witness.
inline bool replay(const QuasiEquation& qe, const Countermodel& cm, std::string* why = nullptr) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  try {
    const auto alg = cm.algebra();
    for (std::size_t k = 0; k < qe.premises.size(); ++k)
      if (!(eval_term(qe.premises[k].lhs, cm.assignment, alg) == eval_term(qe.premises[k].rhs, cm.assignment, alg)))
        return fail("premise " + std::to_string(k + 1) + " does not hold");
    const auto p = cm.unit->encode(cm.witness);
    if (!cm.unit->contains(p)) return fail("witness point outside the unit");
    const bool l = eval_term(qe.conclusion.lhs, cm.assignment, alg).contains(p);
    const bool r = eval_term(qe.conclusion.rhs, cm.assignment, alg).contains(p);
    if (l == r) return fail("both sides agree at the witness point");
    return true;
  } catch (const Error& e) {
    return fail(std::string("malformed countermodel: ") + e.what());
  }
}

inline bool replay(const Equation& eq, const Countermodel& cm, std::string* why = nullptr) {
  return replay(as_quasi_equation(eq), cm, why);
}

namespace detail {

inline Countermodel countermodel_from_row(const std::vector<DecoratedVar>& vars, std::size_t row, int n, int base,
                                          SigKind kind, int nvars, const Point& witness) {
  auto unit = square_unit(n, base);
  Assignment asg(static_cast<std::size_t>(nvars), DenseSet::empty(unit));
  std::vector<Bits> bits(static_cast<std::size_t>(nvars), Bits(unit->ambient_size()));
  for (std::size_t v = 0; v < vars.size(); ++v) {
    if (vars[v].is_diag() || !((row >> v) & 1u)) continue;
    bits[static_cast<std::size_t>(vars[v].var)].set(unit->encode(as_point(vars[v].tau)));
  }
  for (int i = 0; i < nvars; ++i) asg[i] = DenseSet(unit, bits[i]);
  return Countermodel{kind, unit, std::move(asg), witness};
}

inline void check_replay(const Equation& eq, const Countermodel& cm) {
  std::string why;
  if (!replay(eq, cm, &why)) throw std::logic_error("internal: countermodel failed replay: " + why);
}

}  // namespace detail

/// Validity in TA_n / SA_n. Diagonal constants are rejected.
inline ValidityResult decide_equation(const Equation& eq, Signature sig, const DecideOptions& opt = {}) {
  if (has_diagonal(eq.lhs) || has_diagonal(eq.rhs))
    throw Error("decide_equation: diagonal constants present (use decide_with_diagonals)");
  ValidityResult res;
  res.method = Method::NormalForm;
  res.seed = opt.seed;
  std::vector<NormalForm> nfs;
  try {
    nfs = normalize_joint({eq.lhs, eq.rhs}, sig, opt.limits);
  } catch (const BudgetExceeded& e) {
    res.status = Status::Unknown;
    res.note = std::string("budget: ") + e.what();
    return res;
  }
  Bits diff = nfs[0].table ^ nfs[1].table;
  const auto row = diff.find_first();
  if (row == Bits::npos) {
    res.status = Status::Valid;
    return res;
  }
  const int n = sig.dim;
  auto cm = detail::countermodel_from_row(nfs[0].vars, row, n, n, sig.kind, var_bound(as_quasi_equation(eq)),
                                          as_point(Transformation::identity(n)));
  detail::check_replay(eq, cm);
  res.status = Status::Invalid;
  res.countermodel = std::move(cm);
  return res;
}

/// Set partitions of {0..n-1} as restricted growth strings, in lexicographic order.
inline std::vector<Point> set_partitions(int n) {
  std::vector<Point> out;
  Point q(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int pos, int blocks) {
    if (pos == n) {
      out.push_back(q);
      return;
    }
    for (int b = 0; b <= blocks; ++b) {
      q[pos] = b;
      rec(pos + 1, std::max(blocks, b + 1));
    }
  };
  rec(0, 0);
  return out;
}

/// Semantic validity over all square set algebras with diagonals.
inline ValidityResult decide_with_diagonals(const Equation& eq, Signature sig, const DecideOptions& opt = {}) {
  ValidityResult res;
  res.method = Method::Partition;
  res.seed = opt.seed;
  std::vector<NormalForm> nfs;
  try {
    nfs = normalize_joint({eq.lhs, eq.rhs}, sig, opt.limits);
  } catch (const BudgetExceeded& e) {
    res.status = Status::Unknown;
    res.note = std::string("budget: ") + e.what();
    return res;
  }
  const int n = sig.dim;
  for (const auto& q : set_partitions(n)) {
    const int blocks = *std::max_element(q.begin(), q.end()) + 1;
    auto image = [&](const DecoratedVar& v) -> std::optional<DecoratedVar> {
      if (v.is_diag()) return std::nullopt;
      std::vector<int> p(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) p[k] = q[v.tau(k)];
      return DecoratedVar::of(Transformation::from_ints(p), v.var);
    };
    auto diag_value = [&](const DecoratedVar& v) { return q[v.i] == q[v.j]; };
    auto a = relabel(nfs[0], image, diag_value);
    auto b = relabel(nfs[1], image, diag_value);
    std::vector<DecoratedVar> all = a.vars;
    all.insert(all.end(), b.vars.begin(), b.vars.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    Bits diff = extend_to(a, all).table ^ extend_to(b, all).table;
    const auto row = diff.find_first();
    if (row == Bits::npos) continue;
    auto cm = detail::countermodel_from_row(all, row, n, blocks, sig.kind, var_bound(as_quasi_equation(eq)), q);
    detail::check_replay(eq, cm);
    res.status = Status::Invalid;
    res.countermodel = std::move(cm);
    return res;
  }
  res.status = Status::Valid;
  return res;
}

/// Picks the procedure matching the equation: partition sweep when diagonals occur.
inline ValidityResult decide(const Equation& eq, Signature sig, const DecideOptions& opt = {}) {
  if (has_diagonal(eq.lhs) || has_diagonal(eq.rhs)) return decide_with_diagonals(eq, sig, opt);
  return decide_equation(eq, sig, opt);
}

struct AlgebraCheck {
  std::optional<Countermodel> countermodel;
  bool exhaustive = false;
  std::uint64_t assignments = 0;
};

namespace detail {

inline std::optional<Point> falsify(const QuasiEquation& qe, const Assignment& asg, const SetAlgebra& alg) {
  for (const auto& e : qe.premises)
    if (!(eval_term(e.lhs, asg, alg) == eval_term(e.rhs, asg, alg))) return std::nullopt;
  auto l = eval_term(qe.conclusion.lhs, asg, alg);
  auto r = eval_term(qe.conclusion.rhs, asg, alg);
  Bits d = l.bits() ^ r.bits();
  auto p = d.find_first();
  if (p == Bits::npos) return std::nullopt;
  return alg.unit()->decode(p);
}

}  // namespace detail

/// Checks a quasi-equation in one finite set algebra: every assignment when
/// |℘(V)|^#vars fits the budget, else `samples` seeded random assignments.
inline AlgebraCheck brute_force_check(const QuasiEquation& qe, const SetAlgebra& alg, const DecideOptions& opt = {}) {
  AlgebraCheck out;
  const auto vs = vars_of(qe);
  const int nv = var_bound(qe);
  const auto& unit = alg.unit();
  const auto pts = unit->points();
  const std::size_t c = pts.size();
  Assignment asg(static_cast<std::size_t>(nv), alg.bottom());
  std::vector<int> used(vs.begin(), vs.end());

  const double log2_total = static_cast<double>(c) * static_cast<double>(used.size());
  out.exhaustive = log2_total < 63.0 && (std::uint64_t{1} << static_cast<unsigned>(log2_total)) <= opt.budget_assignments;
  auto from_subset = [&](std::uint64_t mask) {
    Bits b(unit->ambient_size());
    for (std::size_t k = 0; k < c; ++k)
      if (mask >> k & 1u) b.set(pts[k]);
    return DenseSet(unit, std::move(b));
  };
  auto found = [&]() {
    if (auto w = detail::falsify(qe, asg, alg)) {
      out.countermodel = Countermodel{alg.signature().kind, unit, asg, *w};
      return true;
    }
    return false;
  };

  if (out.exhaustive) {
    const std::uint64_t per = c == 0 ? 1 : (std::uint64_t{1} << c);
    std::vector<std::uint64_t> masks(used.size(), 0);
    while (true) {
      for (std::size_t k = 0; k < used.size(); ++k) asg[used[k]] = from_subset(masks[k]);
      ++out.assignments;
      if (found()) return out;
      std::size_t k = 0;
      while (k < masks.size() && ++masks[k] == per) masks[k++] = 0;
      if (k == masks.size()) break;
    }
    return out;
  }

  std::mt19937_64 rng(opt.seed);
  for (std::uint64_t s = 0; s < opt.samples; ++s) {
    for (int v : used) {
      Bits b(unit->ambient_size());
      std::uint64_t word = 0;
      for (std::size_t k = 0; k < c; ++k) {
        if (k % 64 == 0) word = rng();
        if (word >> (k % 64) & 1u) b.set(pts[k]);
      }
      asg[v] = DenseSet(unit, std::move(b));
    }
    ++out.assignments;
    if (found()) return out;
  }
  return out;
}

inline AlgebraCheck brute_force_check(const Equation& eq, const SetAlgebra& alg, const DecideOptions& opt = {}) {
  return brute_force_check(as_quasi_equation(eq), alg, opt);
}

/// Validity over RTA_n / RSA_n, which is SP of the small algebras A_nk, k <= n.
inline ValidityResult decide_quasi_equation(const QuasiEquation& qe, Signature sig, const DecideOptions& opt = {}) {
  ValidityResult res;
  res.seed = opt.seed;
  bool all_exhaustive = true;
  for (int k = 0; k <= sig.dim; ++k) {
    const auto alg = small_algebra(sig.dim, k, sig.kind, opt.limits);
    DecideOptions o = opt;
    o.seed = opt.seed + static_cast<std::uint64_t>(k);
    auto chk = brute_force_check(qe, alg, o);
    all_exhaustive = all_exhaustive && chk.exhaustive;
    if (chk.countermodel) {
      res.status = Status::Invalid;
      res.method = chk.exhaustive ? Method::Exhaustive : Method::Sampled;
      res.countermodel = std::move(chk.countermodel);
      return res;
    }
  }
  res.status = all_exhaustive ? Status::Valid : Status::Unknown;
  res.method = all_exhaustive ? Method::Exhaustive : Method::Sampled;
  if (!all_exhaustive) res.note = "sampled-clean";
  return res;
}

/// φ is valid iff its translation equals 1.
inline ValidityResult decide_formula(const Formula& f, Signature sig, const DecideOptions& opt = {}) {
  return decide(Equation{translate(f), Term::top()}, sig, opt);
}

}  // namespace subst
