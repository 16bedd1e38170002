#pragma once

// Transformations of {0..n-1}, substitution words over transpositions [i,j]
// and replacements [i/j], the hat map, canonical words and rewriting traces.

#include "subst/core.hpp"

#include <algorithm>
#include <cctype>
#include <compare>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace subst {

enum class SigKind { TA, SA, SAD };

inline std::string to_string(SigKind k) {
  switch (k) {
    case SigKind::TA: return "TA";
    case SigKind::SA: return "SA";
    case SigKind::SAD: return "SAD";
  }
  return "?";
}

inline SigKind parse_sig_kind(std::string_view s) {
  if (s == "TA") return SigKind::TA;
  if (s == "SA") return SigKind::SA;
  if (s == "SAD") return SigKind::SAD;
  throw Error("unknown signature '" + std::string(s) + "' (expected TA, SA or SAD)");
}

struct Signature {
  int dim = 2;
  SigKind kind = SigKind::TA;

  bool replacements() const { return kind != SigKind::TA; }
  bool diagonals() const { return kind == SigKind::SAD; }
  bool operator==(const Signature&) const = default;
};

inline Signature make_signature(int dim, SigKind kind) {
  if (dim < 2) throw Error("dimension must be at least 2");
  if (dim > 255) throw Error("dimension out of range");
  return Signature{dim, kind};
}

/// A total map {0..n-1} -> {0..n-1}; images[k] is the image of k.
class Transformation {
 public:
  Transformation() = default;

  explicit Transformation(std::vector<std::uint8_t> images) : images_(std::move(images)) {
    if (images_.empty()) throw Error("transformation of dimension 0");
    for (auto v : images_)
      if (v >= images_.size()) throw Error("transformation image out of range");
  }

  static Transformation from_ints(const std::vector<int>& images) {
    std::vector<std::uint8_t> v;
    v.reserve(images.size());
    for (int x : images) {
      if (x < 0 || x > 255) throw Error("transformation image out of range");
      v.push_back(static_cast<std::uint8_t>(x));
    }
    return Transformation(std::move(v));
  }

  static Transformation identity(int n) {
    std::vector<std::uint8_t> v(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) v[k] = static_cast<std::uint8_t>(k);
    return Transformation(std::move(v));
  }

  /// [i,j]: swaps i and j.
  static Transformation transposition(int n, int i, int j) {
    auto t = identity(n);
    std::swap(t.images_.at(i), t.images_.at(j));
    return t;
  }

  /// [i/j]: sends i to j, fixes everything else.
  static Transformation replacement(int n, int i, int j) {
    auto t = identity(n);
    t.images_.at(i) = static_cast<std::uint8_t>(j);
    return t;
  }

  int dim() const { return static_cast<int>(images_.size()); }
  int operator()(int k) const { return images_[static_cast<std::size_t>(k)]; }
  std::span<const std::uint8_t> images() const { return images_; }

  bool is_identity() const {
    for (std::size_t k = 0; k < images_.size(); ++k)
      if (images_[k] != k) return false;
    return true;
  }

  bool is_permutation() const {
    std::vector<bool> seen(images_.size());
    for (auto v : images_) {
      if (seen[v]) return false;
      seen[v] = true;
    }
    return true;
  }

  /// Rank in the lexicographic order of all maps n -> n.
  std::uint64_t code() const {
    std::uint64_t c = 0;
    for (auto v : images_) c = c * images_.size() + v;
    return c;
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t k = 0; k < images_.size(); ++k) {
      if (k) s += ',';
      s += std::to_string(images_[k]);
    }
    return s + ")";
  }

  auto operator<=>(const Transformation&) const = default;
  bool operator==(const Transformation&) const = default;

 private:
  std::vector<std::uint8_t> images_;
};

/// (a ∘ b)(k) = a(b(k)).
inline Transformation compose(const Transformation& a, const Transformation& b) {
  if (a.dim() != b.dim()) throw Error("compose: dimension mismatch");
  std::vector<std::uint8_t> v(static_cast<std::size_t>(a.dim()));
  for (int k = 0; k < a.dim(); ++k) v[k] = static_cast<std::uint8_t>(a(b(k)));
  return Transformation(std::move(v));
}

struct Letter {
  enum class Kind : std::uint8_t { Transpose, Replace };
  Kind kind = Kind::Transpose;
  std::uint8_t i = 0;
  std::uint8_t j = 1;

  /// Transpositions are stored with i < j; s[j,i] and s[i,j] are the same letter.
  static Letter transpose(int i, int j) {
    if (i == j || i < 0 || j < 0) throw Error("transposition needs two distinct indices");
    if (i > j) std::swap(i, j);
    return Letter{Kind::Transpose, static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)};
  }
  static Letter replace(int i, int j) {
    if (i == j || i < 0 || j < 0) throw Error("replacement needs two distinct indices");
    return Letter{Kind::Replace, static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j)};
  }

  bool is_transpose() const { return kind == Kind::Transpose; }
  /// Adjacent transposition s[k,k+1].
  bool is_adjacent() const { return is_transpose() && j == i + 1; }

  Transformation value(int n) const {
    return is_transpose() ? Transformation::transposition(n, i, j)
                          : Transformation::replacement(n, i, j);
  }

  std::string to_string() const {
    return "s[" + std::to_string(i) + (is_transpose() ? "," : "/") + std::to_string(j) + "]";
  }

  auto operator<=>(const Letter&) const = default;
  bool operator==(const Letter&) const = default;
};

inline Letter sigma(int k) { return Letter::transpose(k, k + 1); }

struct SubstWord {
  int dim = 2;
  std::vector<Letter> letters;

  bool transposition_only() const {
    return std::all_of(letters.begin(), letters.end(), [](const Letter& l) { return l.is_transpose(); });
  }
  std::size_t size() const { return letters.size(); }

  std::string to_string() const {
    if (letters.empty()) return "e";
    std::string s;
    for (std::size_t k = 0; k < letters.size(); ++k) {
      if (k) s += ' ';
      s += letters[k].to_string();
    }
    return s;
  }

  bool operator==(const SubstWord&) const = default;
};

inline void check_letter(const Letter& l, int n) {
  if (l.i >= n || l.j >= n) throw Error("letter " + l.to_string() + " out of range for dimension " + std::to_string(n));
}

inline SubstWord concat(const SubstWord& a, const SubstWord& b) {
  if (a.dim != b.dim) throw Error("concat: dimension mismatch");
  SubstWord w{a.dim, a.letters};
  w.letters.insert(w.letters.end(), b.letters.begin(), b.letters.end());
  return w;
}

/// Word syntax: `s[i,j]`, `s[i/j]` separated by whitespace, or `e` for the empty word.
inline SubstWord parse_word(std::string_view text, int dim) {
  SubstWord w{dim, {}};
  std::size_t p = 0;
  auto skip = [&] { while (p < text.size() && std::isspace(static_cast<unsigned char>(text[p]))) ++p; };
  auto number = [&]() -> int {
    skip();
    std::size_t start = p;
    while (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
    if (start == p) throw ParseError("expected index", p);
    return std::stoi(std::string(text.substr(start, p - start)));
  };
  auto expect = [&](char c) {
    skip();
    if (p >= text.size() || text[p] != c) throw ParseError(std::string("expected '") + c + "'", p);
    ++p;
  };
  skip();
  if (p < text.size() && text[p] == 'e') {
    ++p;
    skip();
    if (p != text.size()) throw ParseError("unexpected input after empty word", p);
    return w;
  }
  while (true) {
    skip();
    if (p == text.size()) break;
    std::size_t at = p;
    expect('s');
    expect('[');
    int i = number();
    skip();
    if (p >= text.size() || (text[p] != ',' && text[p] != '/')) throw ParseError("expected ',' or '/'", p);
    bool replace = text[p] == '/';
    ++p;
    int j = number();
    expect(']');
    if (i >= dim || j >= dim) throw ParseError("index out of range for dimension " + std::to_string(dim), at);
    if (i == j) throw ParseError("indices must differ", at);
    w.letters.push_back(replace ? Letter::replace(i, j) : Letter::transpose(i, j));
  }
  if (w.letters.empty()) throw ParseError("empty input (use 'e' for the empty word)", 0);
  return w;
}

/// hat(l1 l2 ... lk) = l1 ∘ l2 ∘ ... ∘ lk; the empty word maps to the identity.
inline Transformation hat(const SubstWord& w) {
  auto t = Transformation::identity(w.dim);
  for (const auto& l : w.letters) {
    check_letter(l, w.dim);
    t = compose(t, l.value(w.dim));
  }
  return t;
}

/// Generators of the signature in letter order: transpositions (i<j), then replacements.
inline std::vector<Letter> generator_letters(int n, SigKind kind) {
  std::vector<Letter> out;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back(Letter::transpose(i, j));
  if (kind != SigKind::TA)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) out.push_back(Letter::replace(i, j));
  return out;
}

/// S_n (TA) or ^n n (SA, SAD) in lexicographic order of image sequences.
inline std::vector<Transformation> enumerate_monoid(int n, SigKind kind, const Limits& lim = default_limits()) {
  const int bound = kind == SigKind::TA ? lim.max_dim_ta : lim.max_dim_sa;
  if (n < 1 || n > bound)
    throw BudgetExceeded("monoid enumeration bound exceeded (n=" + std::to_string(n) + ", bound " + std::to_string(bound) + ")");
  std::vector<Transformation> out;
  std::vector<int> digits(static_cast<std::size_t>(n), 0);
  while (true) {
    auto t = Transformation::from_ints(digits);
    if (kind != SigKind::TA || t.is_permutation()) out.push_back(std::move(t));
    int k = n - 1;
    while (k >= 0 && digits[k] == n - 1) digits[k--] = 0;
    if (k < 0) break;
    ++digits[k];
  }
  return out;
}

namespace detail {

struct WordTable {
  std::map<Transformation, std::vector<Letter>> words;
};

/// Breadth-first search over the Cayley graph from the identity. Layers are
/// processed in lexicographic word order, so the first word reaching each
/// transformation is the lexicographically least among the shortest ones.
inline WordTable build_word_table(int n, SigKind kind) {
  WordTable table;
  const auto gens = generator_letters(n, kind);
  std::vector<std::pair<Transformation, std::vector<Letter>>> layer{{Transformation::identity(n), {}}};
  table.words.emplace(Transformation::identity(n), std::vector<Letter>{});
  while (!layer.empty()) {
    std::vector<std::pair<Transformation, std::vector<Letter>>> next;
    for (const auto& [t, w] : layer) {
      for (const auto& g : gens) {
        auto u = compose(t, g.value(n));
        if (table.words.count(u)) continue;
        auto word = w;
        word.push_back(g);
        table.words.emplace(u, word);
        next.emplace_back(std::move(u), std::move(word));
      }
    }
    layer = std::move(next);
  }
  return table;
}

inline const WordTable& word_table(int n, SigKind kind) {
  static std::mutex mu;
  static std::map<std::pair<int, bool>, WordTable> cache;
  const bool sa = kind != SigKind::TA;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, sa);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_word_table(n, sa ? SigKind::SA : SigKind::TA)).first;
  return it->second;
}

}  // namespace detail

/// Lexicographically least shortest word w with hat(w) = t.
inline SubstWord decompose(const Transformation& t, SigKind kind, const Limits& lim = default_limits()) {
  const int n = t.dim();
  if (kind == SigKind::TA && !t.is_permutation())
    throw Error("decompose: " + t.to_string() + " is not a permutation (TA signature)");
  const int bound = kind == SigKind::TA ? lim.max_dim_ta : lim.max_dim_sa;
  if (n > bound) throw BudgetExceeded("decompose: dimension above enumeration bound");
  const auto& table = detail::word_table(n, kind);
  return SubstWord{n, table.words.at(t)};
}

/// Presentation theorems: derivable from the word relations iff the hats agree.
inline bool words_equal_by_axioms(const SubstWord& a, const SubstWord& b) {
  if (a.dim != b.dim) throw Error("words_equal_by_axioms: dimension mismatch");
  return hat(a) == hat(b);
}

// ---------------------------------------------------------------------------
// Word relations and rewriting traces

struct WordRelation {
  std::string id;  // "4", "5", "6", "conj", "S1".."S11"
  std::vector<Letter> lhs;
  std::vector<Letter> rhs;
};

/// All index instances of the word-level schemas for dimension n.
/// Replacement letters follow the reading s^a_b = s[a/b].
inline std::vector<WordRelation> word_relations(int n, SigKind kind) {
  std::vector<WordRelation> out;
  auto T = [](int i, int j) { return Letter::transpose(i, j); };
  auto R = [](int i, int j) { return Letter::replace(i, j); };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back({"4", {T(i, j), T(i, j)}, {}});
  for (int i = 0; i + 1 < n; ++i)
    for (int j = i + 2; j + 1 < n; ++j) out.push_back({"5", {sigma(i), sigma(j)}, {sigma(j), sigma(i)}});
  for (int i = 0; i + 2 < n; ++i)
    out.push_back({"6", {sigma(i), sigma(i + 1), sigma(i)}, {sigma(i + 1), sigma(i), sigma(i + 1)}});
  {
    // s_ik = s_jk s_ij s_jk, deduplicated over unordered transpositions
    std::vector<std::pair<std::vector<Letter>, std::vector<Letter>>> seen;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          if (i == j || j == k || i == k) continue;
          std::vector<Letter> l{T(i, k)};
          std::vector<Letter> r{T(j, k), T(i, j), T(j, k)};
          if (std::find(seen.begin(), seen.end(), std::make_pair(l, r)) != seen.end()) continue;
          seen.emplace_back(l, r);
          out.push_back({"conj", l, r});
        }
  }
  if (kind == SigKind::TA) return out;

  auto distinct = [](std::initializer_list<int> xs) {
    std::vector<int> v(xs);
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      out.push_back({"S4", {T(i, j), R(j, i), T(i, j)}, {R(i, j)}});
      out.push_back({"S9", {R(j, i), R(j, i)}, {R(j, i)}});
      out.push_back({"S10", {R(j, i), R(i, j)}, {R(j, i)}});
      out.push_back({"S11", {R(j, i), T(i, j)}, {R(j, i)}});
      for (int k = 0; k < n; ++k) {
        if (!distinct({i, j, k})) continue;
        out.push_back({"S2", {T(j, k), R(j, i), T(j, k)}, {R(k, i)}});
        out.push_back({"S3", {T(k, i), R(j, i), T(k, i)}, {R(j, k)}});
        out.push_back({"S6a", {R(j, i), R(k, i)}, {R(k, i), R(j, i)}});
        out.push_back({"S6b", {R(k, i), R(j, i)}, {R(j, i), R(k, j)}});
        out.push_back({"S7", {R(j, i), R(i, k)}, {R(j, k), T(i, j)}});
        out.push_back({"S8", {R(j, i), R(j, k)}, {R(j, k)}});
        for (int l = 0; l < n; ++l) {
          if (!distinct({i, j, k, l})) continue;
          out.push_back({"S1", {T(k, l), R(j, i), T(k, l)}, {R(j, i)}});
          out.push_back({"S5", {R(j, i), R(k, l)}, {R(k, l), R(j, i)}});
        }
      }
    }
  return out;
}

struct TraceStep {
  std::string rule;         // relation id
  std::size_t position = 0; // start of the rewritten window in the previous word
  std::size_t removed = 0;  // window length in the previous word
  SubstWord result;         // whole word after the step
};

struct ProofTrace {
  SubstWord start;
  SubstWord end;
  std::vector<TraceStep> steps;
};

namespace detail {

class TraceBuilder {
 public:
  explicit TraceBuilder(SubstWord w) : word_(std::move(w)) { trace_.start = word_; }

  std::vector<Letter>& letters() { return word_.letters; }

  void rewrite(std::string rule, std::size_t pos, std::size_t removed, std::vector<Letter> replacement) {
    auto& ls = word_.letters;
    ls.erase(ls.begin() + static_cast<std::ptrdiff_t>(pos), ls.begin() + static_cast<std::ptrdiff_t>(pos + removed));
    ls.insert(ls.begin() + static_cast<std::ptrdiff_t>(pos), replacement.begin(), replacement.end());
    trace_.steps.push_back({std::move(rule), pos, removed, word_});
  }

  /// Commute the letters at pos and pos+1 (axiom 5).
  void commute(std::size_t pos) {
    auto& ls = word_.letters;
    rewrite("5", pos, 2, {ls[pos + 1], ls[pos]});
  }

  ProofTrace finish() {
    trace_.end = word_;
    return std::move(trace_);
  }

 private:
  SubstWord word_;
  ProofTrace trace_;
};

}  // namespace detail

/// Canonical reduced word for hat(w) together with a rewriting trace.
///
/// The canonical form is R_1 R_2 ... R_{n-1} where R_m is a descending run
/// s[m-1,m] s[m-2,m-1] ... of length at most m. Non-adjacent transpositions are
/// first expanded by conjugation; each remaining letter is then inserted into
/// the already-normal prefix, moving left through the runs by commutations (5),
/// braid moves (6), and finally either cancelling (4) or extending a run.
inline std::pair<SubstWord, ProofTrace> coxeter_normal_form(const SubstWord& w) {
  if (!w.transposition_only()) throw Error("coxeter_normal_form: word contains a replacement letter");
  const int n = w.dim;
  for (const auto& l : w.letters) check_letter(l, n);
  detail::TraceBuilder tb(w);

  for (std::size_t p = 0; p < tb.letters().size();) {
    const Letter l = tb.letters()[p];
    if (l.is_adjacent()) {
      ++p;
      continue;
    }
    const int i = l.i, j = l.j, c = j - 1;
    tb.rewrite("conj", p, 1, {Letter::transpose(c, j), Letter::transpose(i, c), Letter::transpose(c, j)});
  }

  // runs[m] = length of R_m (m = 1..n-1); R_m occupies the letters
  // s_{m-1}, s_{m-2}, ..., s_{m-len}.
  std::vector<std::size_t> runs(static_cast<std::size_t>(n), 0);
  std::size_t prefix = 0;
  auto run_start = [&](int m) {
    std::size_t s = 0;
    for (int r = 1; r < m; ++r) s += runs[r];
    return s;
  };

  while (prefix < tb.letters().size()) {
    int k = tb.letters()[prefix].i;
    std::size_t pos = prefix;  // current position of the moving letter
    bool consumed = false;
    for (int m = n - 1; m >= 1 && !consumed; --m) {
      const std::size_t len = runs[m];
      const std::size_t start = run_start(m);
      const int low = m - static_cast<int>(len);  // lowest generator index in R_m (== m if empty)
      if (len == 0) {
        if (m == k + 1) {
          runs[m] = 1;
          consumed = true;
        }
        continue;
      }
      if (low >= k + 2) {
        for (std::size_t q = pos; q > start; --q) tb.commute(q - 1);
        pos = start;
      } else if (low == k + 1) {
        runs[m] += 1;
        consumed = true;
      } else if (low == k) {
        tb.rewrite("4", pos - 1, 2, {});
        runs[m] -= 1;
        consumed = true;
      } else {
        // R_m = H s_k s_{k-1} T with T = s_{k-2} ... s_low
        const std::size_t tail = static_cast<std::size_t>(k - 1 - low);
        for (std::size_t q = 0; q < tail; ++q) tb.commute(pos - 1 - q);
        pos -= tail;
        tb.rewrite("6", pos - 2, 3, {sigma(k - 1), sigma(k), sigma(k - 1)});
        const std::size_t head = static_cast<std::size_t>(m - 1 - k);
        for (std::size_t q = 0; q < head; ++q) tb.commute(pos - 3 - q);
        pos = start;
        k -= 1;
      }
    }
    if (!consumed) throw Error("coxeter_normal_form: internal error, letter not absorbed");
    prefix = run_start(n);
  }
  auto trace = tb.finish();
  return {trace.end, std::move(trace)};
}

/// Checks every step of a trace: each rewrites one window by an instance of
/// the cited relation (either direction) and preserves the hat value.
inline bool replay_trace(const ProofTrace& trace, SigKind kind, std::string* why = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  const int n = trace.start.dim;
  const auto relations = word_relations(n, kind);
  const auto target = hat(trace.start);
  SubstWord cur = trace.start;
  for (std::size_t s = 0; s < trace.steps.size(); ++s) {
    const auto& st = trace.steps[s];
    const auto& next = st.result;
    if (st.position + st.removed > cur.size()) return fail("step " + std::to_string(s) + ": window out of range");
    const std::size_t added = next.size() + st.removed - cur.size();
    if (next.size() + st.removed < cur.size() || st.position + added > next.size())
      return fail("step " + std::to_string(s) + ": inconsistent lengths");
    auto b = cur.letters.begin();
    auto nb = next.letters.begin();
    auto P = static_cast<std::ptrdiff_t>(st.position);
    if (!std::equal(b, b + P, nb)) return fail("step " + std::to_string(s) + ": prefix changed");
    if (!std::equal(b + P + static_cast<std::ptrdiff_t>(st.removed), cur.letters.end(),
                    nb + P + static_cast<std::ptrdiff_t>(added)))
      return fail("step " + std::to_string(s) + ": suffix changed");
    std::vector<Letter> removed(b + P, b + P + static_cast<std::ptrdiff_t>(st.removed));
    std::vector<Letter> inserted(nb + P, nb + P + static_cast<std::ptrdiff_t>(added));
    bool ok = std::any_of(relations.begin(), relations.end(), [&](const WordRelation& r) {
      return r.id == st.rule && ((r.lhs == removed && r.rhs == inserted) || (r.rhs == removed && r.lhs == inserted));
    });
    if (!ok) return fail("step " + std::to_string(s) + ": not an instance of relation " + st.rule);
    if (hat(next) != target) return fail("step " + std::to_string(s) + ": hat changed");
    cur = next;
  }
  if (!(cur == trace.end)) return fail("trace does not end at the recorded word");
  return true;
}

}  // namespace subst
