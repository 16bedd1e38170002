#pragma once

// Canonical Boolean functions over decorated variables s_τ x_i and diagonal
// constants. Substitutions are pushed to the leaves, where s_σ s_τ x = s_{σ∘τ} x
// and s_σ d_ij = d_{σ(i)σ(j)}; the remaining Boolean structure becomes a truth
// table whose row r assigns variable v the bit (r >> v) & 1.

#include "subst/core.hpp"
#include "subst/perm.hpp"
#include "subst/term.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace subst {

struct DecoratedVar {
  enum class Kind : std::uint8_t { Var, Diag };
  Kind kind = Kind::Var;
  Transformation tau;  // Var only
  int var = 0;         // Var only
  int i = 0, j = 0;    // Diag only, i < j

  static DecoratedVar of(Transformation tau, int var) { return {Kind::Var, std::move(tau), var, 0, 0}; }
  static DecoratedVar diag(int i, int j) {
    if (i == j) throw Error("diagonal variable needs distinct indices");
    if (i > j) std::swap(i, j);
    return {Kind::Diag, Transformation(), 0, i, j};
  }

  bool is_diag() const { return kind == Kind::Diag; }

  std::string to_string() const {
    if (is_diag()) return "d[" + std::to_string(i) + "," + std::to_string(j) + "]";
    return "s" + tau.to_string() + " x" + std::to_string(var);
  }

  bool operator==(const DecoratedVar& o) const {
    if (kind != o.kind) return false;
    return is_diag() ? (i == o.i && j == o.j) : (var == o.var && tau == o.tau);
  }
  bool operator<(const DecoratedVar& o) const {
    if (kind != o.kind) return kind == Kind::Var;
    if (is_diag()) return std::tie(i, j) < std::tie(o.i, o.j);
    if (var != o.var) return var < o.var;
    return tau < o.tau;
  }
};

struct NormalForm {
  std::vector<DecoratedVar> vars;
  Bits table;  // 2^|vars| rows

  bool is_true() const { return table.all(); }
  bool is_false() const { return table.none(); }
  bool operator==(const NormalForm& o) const { return vars == o.vars && table == o.table; }
};

namespace detail {

/// Truth-table column of variable p over k variables.
inline Bits column(std::size_t k, std::size_t p) {
  const std::size_t rows = std::size_t{1} << k;
  if (p < 6) {
    static const std::uint64_t patterns[6] = {0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
                                              0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
    std::vector<std::uint64_t> blocks((rows + 63) / 64, patterns[p]);
    Bits b(blocks.begin(), blocks.end());
    b.resize(rows);
    return b;
  }
  const std::size_t period = std::size_t{1} << (p - 6);  // in 64-bit blocks
  std::vector<std::uint64_t> blocks(rows / 64);
  for (std::size_t w = 0; w < blocks.size(); ++w) blocks[w] = (w / period) % 2 ? ~std::uint64_t{0} : 0;
  return Bits(blocks.begin(), blocks.end());
}

inline Bits constant_table(std::size_t k, bool value) {
  Bits b(std::size_t{1} << k);
  if (value) b.set();
  return b;
}

/// Postfix program over leaf slots; leaves refer to positions in a variable pool.
struct Program {
  enum class Op : std::uint8_t { Leaf, Top, Bottom, Not, And, Or };
  std::vector<std::pair<Op, std::size_t>> code;
};

class Compiler {
 public:
  explicit Compiler(Signature sig) : sig_(sig) {}

  Program compile(const Term& t) {
    Program p;
    emit(t, Transformation::identity(sig_.dim), p);
    return p;
  }

  const std::vector<DecoratedVar>& pool() const { return pool_; }

 private:
  std::size_t slot(const DecoratedVar& v) {
    for (std::size_t k = 0; k < pool_.size(); ++k)
      if (pool_[k] == v) return k;
    pool_.push_back(v);
    return pool_.size() - 1;
  }

  void emit(const Term& t, const Transformation& ctx, Program& p) {
    using Op = Program::Op;
    switch (t.kind()) {
      case Term::Kind::Var: p.code.emplace_back(Op::Leaf, slot(DecoratedVar::of(ctx, t.index()))); return;
      case Term::Kind::Top: p.code.emplace_back(Op::Top, 0); return;
      case Term::Kind::Bottom: p.code.emplace_back(Op::Bottom, 0); return;
      case Term::Kind::Diag: {
        int a = ctx(t.diag_i()), b = ctx(t.diag_j());
        if (a == b) p.code.emplace_back(Op::Top, 0);
        else p.code.emplace_back(Op::Leaf, slot(DecoratedVar::diag(a, b)));
        return;
      }
      case Term::Kind::Not:
        emit(t.child(), ctx, p);
        p.code.emplace_back(Op::Not, 0);
        return;
      case Term::Kind::And:
      case Term::Kind::Or:
        emit(t.left(), ctx, p);
        emit(t.right(), ctx, p);
        p.code.emplace_back(t.kind() == Term::Kind::And ? Op::And : Op::Or, 0);
        return;
      case Term::Kind::Subst:
        check_letter(t.letter(), sig_.dim);
        emit(t.child(), compose(ctx, t.letter().value(sig_.dim)), p);
        return;
    }
  }

  Signature sig_;
  std::vector<DecoratedVar> pool_;
};

/// Evaluates a program on truth-table columns; `where[slot]` is the sorted position of each pool slot.
inline Bits run(const Program& prog, const std::vector<std::size_t>& where, std::size_t k) {
  using Op = Program::Op;
  std::vector<Bits> stack;
  std::map<std::size_t, Bits> columns;
  for (const auto& [op, arg] : prog.code) {
    switch (op) {
      case Op::Leaf: {
        auto pos = where[arg];
        auto it = columns.find(pos);
        if (it == columns.end()) it = columns.emplace(pos, column(k, pos)).first;
        stack.push_back(it->second);
        break;
      }
      case Op::Top: stack.push_back(constant_table(k, true)); break;
      case Op::Bottom: stack.push_back(constant_table(k, false)); break;
      case Op::Not: stack.back().flip(); break;
      case Op::And:
      case Op::Or: {
        Bits r = std::move(stack.back());
        stack.pop_back();
        if (op == Op::And) stack.back() &= r;
        else stack.back() |= r;
        break;
      }
    }
  }
  return std::move(stack.back());
}

inline bool influences(const Bits& f, std::size_t k, std::size_t p) {
  const Bits m = column(k, p);
  return ((f & m) >> (std::size_t{1} << p)) != (f - m);
}

/// Re-expresses `nf` over `vars`; `source[v]` gives, for each old variable,
/// the new position it reads from, or a constant (-1 false, -2 true).
inline Bits remap_table(const Bits& table, std::size_t old_k, const std::vector<long>& source, std::size_t new_k) {
  Bits out(std::size_t{1} << new_k);
  for (std::size_t r = 0; r < out.size(); ++r) {
    std::size_t old_row = 0;
    for (std::size_t v = 0; v < old_k; ++v) {
      const long s = source[v];
      bool bit = s == -2 || (s >= 0 && (r >> s) & 1u);
      if (bit) old_row |= std::size_t{1} << v;
    }
    if (table.test(old_row)) out.set(r);
  }
  return out;
}

}  // namespace detail

/// Drops variables that do not influence the function.
inline NormalForm reduce(NormalForm nf) {
  const std::size_t k = nf.vars.size();
  std::vector<std::size_t> keep;
  for (std::size_t p = 0; p < k; ++p)
    if (detail::influences(nf.table, k, p)) keep.push_back(p);
  if (keep.size() == k) return nf;
  std::vector<long> source(k, -1);
  for (std::size_t q = 0; q < keep.size(); ++q) source[keep[q]] = static_cast<long>(q);
  NormalForm out;
  for (auto p : keep) out.vars.push_back(nf.vars[p]);
  out.table = detail::remap_table(nf.table, k, source, keep.size());
  return out;
}

/// Tables for several terms over one shared, sorted variable list (unreduced).
inline std::vector<NormalForm> normalize_joint(const std::vector<Term>& terms, Signature sig,
                                               const Limits& lim = default_limits()) {
  detail::Compiler c(sig);
  std::vector<detail::Program> progs;
  for (const auto& t : terms) {
    check_term(t, sig);
    progs.push_back(c.compile(t));
  }
  const auto& pool = c.pool();
  if (pool.size() > lim.max_decorated_vars)
    throw BudgetExceeded(std::to_string(pool.size()) + " decorated variables exceed the cap of " +
                         std::to_string(lim.max_decorated_vars));
  std::vector<std::size_t> order(pool.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pool[a] < pool[b]; });
  std::vector<std::size_t> where(pool.size());
  std::vector<DecoratedVar> vars;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    where[order[pos]] = pos;
    vars.push_back(pool[order[pos]]);
  }
  std::vector<NormalForm> out;
  for (const auto& p : progs) out.push_back({vars, detail::run(p, where, vars.size())});
  return out;
}

inline NormalForm normalize(const Term& t, Signature sig, const Limits& lim = default_limits()) {
  return reduce(normalize_joint({t}, sig, lim).front());
}

/// Maps every variable through `f`; a nullopt image means the variable becomes constant `fallback(v)`.
inline NormalForm relabel(const NormalForm& nf,
                          const std::function<std::optional<DecoratedVar>(const DecoratedVar&)>& f,
                          const std::function<bool(const DecoratedVar&)>& constant_value = nullptr) {
  std::vector<std::optional<DecoratedVar>> images;
  std::vector<DecoratedVar> vars;
  for (const auto& v : nf.vars) {
    images.push_back(f(v));
    if (images.back()) vars.push_back(*images.back());
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  std::vector<long> source;
  for (std::size_t k = 0; k < nf.vars.size(); ++k) {
    if (images[k]) {
      source.push_back(std::lower_bound(vars.begin(), vars.end(), *images[k]) - vars.begin());
    } else {
      source.push_back(constant_value && constant_value(nf.vars[k]) ? -2 : -1);
    }
  }
  return reduce({vars, detail::remap_table(nf.table, nf.vars.size(), source, vars.size())});
}

/// The substitution action: (τ,i) ↦ (t∘τ,i), d_ij ↦ d_{t(i)t(j)}.
inline NormalForm act(const NormalForm& nf, const Transformation& t) {
  return relabel(
      nf,
      [&](const DecoratedVar& v) -> std::optional<DecoratedVar> {
        if (!v.is_diag()) return DecoratedVar::of(compose(t, v.tau), v.var);
        if (t(v.i) == t(v.j)) return std::nullopt;
        return DecoratedVar::diag(t(v.i), t(v.j));
      },
      [](const DecoratedVar&) { return true; });
}

/// Re-expresses nf over a superset of its variables (unreduced).
inline NormalForm extend_to(const NormalForm& nf, const std::vector<DecoratedVar>& vars) {
  std::vector<long> source;
  for (const auto& v : nf.vars) {
    auto it = std::find(vars.begin(), vars.end(), v);
    if (it == vars.end()) throw Error("extend_to: variable " + v.to_string() + " missing from the target list");
    source.push_back(it - vars.begin());
  }
  return {vars, detail::remap_table(nf.table, nf.vars.size(), source, vars.size())};
}

/// Existential elimination (or of cofactors) of every variable matching `drop`.
inline NormalForm exists(NormalForm nf, const std::function<bool(const DecoratedVar&)>& drop) {
  const std::size_t k = nf.vars.size();
  for (std::size_t p = 0; p < k; ++p) {
    if (!drop(nf.vars[p])) continue;
    const Bits m = detail::column(k, p);
    const std::size_t shift = std::size_t{1} << p;
    Bits low = ((nf.table & m) >> shift) | (nf.table - m);
    nf.table = low | (low << shift);
  }
  return reduce(std::move(nf));
}

/// Truth value of the function under an assignment of the listed variables.
inline bool eval_row(const NormalForm& nf, const std::function<bool(const DecoratedVar&)>& value) {
  std::size_t r = 0;
  for (std::size_t v = 0; v < nf.vars.size(); ++v)
    if (value(nf.vars[v])) r |= std::size_t{1} << v;
  return nf.table.test(r);
}

inline Term literal_term(const DecoratedVar& v, SigKind kind) {
  if (v.is_diag()) return Term::diag(v.i, v.j);
  return Term::apply_word(decompose(v.tau, kind), Term::var(v.var));
}

/// Disjunction of the true rows as minterms; constants print as 1 and 0.
inline Term term_of_normal_form(const NormalForm& nf, SigKind kind) {
  if (nf.is_true()) return Term::top();
  if (nf.is_false()) return Term::bottom();
  std::vector<Term> lits;
  for (const auto& v : nf.vars) lits.push_back(literal_term(v, kind));
  std::optional<Term> out;
  for (auto r = nf.table.find_first(); r != Bits::npos; r = nf.table.find_next(r)) {
    std::optional<Term> m;
    for (std::size_t v = 0; v < nf.vars.size(); ++v) {
      Term lit = (r >> v) & 1u ? lits[v] : Term::negate(lits[v]);
      m = m ? Term::conj(*m, lit) : lit;
    }
    out = out ? Term::disj(*out, *m) : *m;
  }
  return *out;
}

}  // namespace subst
