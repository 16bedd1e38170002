#pragma once

// Command-line front end. Every answer is a JSON document; exit-1 answers
// carry a certificate that `replay` re-checks.
//
// Exit codes: 0 valid / success, 1 invalid with certificate, 2 unknown,
// 3 usage or validation error.

#include "CLI11.hpp"

#include "subst/decision.hpp"
#include "subst/free_algebra.hpp"
#include "subst/kripke.hpp"
#include "subst/perm.hpp"
#include "subst/serialize.hpp"
#include "subst/term.hpp"
#include "subst/verify.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace subst::cli {

enum Exit : int { Ok = 0, Invalid = 1, Unknown = 2, Usage = 3 };

struct RunConfig {
  int dim = 2;
  std::string sig = "TA";
  std::uint64_t seed = 0;
  std::uint64_t budget_assignments = std::uint64_t{1} << 20;
  std::uint64_t samples = 10000;
  bool json = false;

  Signature signature() const { return make_signature(dim, parse_sig_kind(sig)); }

  DecideOptions options() const {
    DecideOptions o;
    o.seed = seed;
    o.budget_assignments = budget_assignments;
    o.samples = samples;
    return o;
  }

  void validate() const {
    if (dim < 2) throw Error("--dim must be at least 2");
    if (budget_assignments == 0) throw Error("--budget-assignments must be positive");
    if (samples == 0) throw Error("--samples must be positive");
    (void)parse_sig_kind(sig);
  }
};

inline int exit_for(Status s) {
  switch (s) {
    case Status::Valid: return Ok;
    case Status::Invalid: return Invalid;
    case Status::Unknown: return Unknown;
  }
  return Unknown;
}

inline std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (const auto& p : parts) {
    if (!s.empty()) s += ' ';
    s += p;
  }
  return s;
}

inline std::string read_all(std::istream& in) {
  std::string s{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  return s;
}

/// A self-contained claim: what was decided, in which signature, and the verdict.
inline Json certificate(const std::string& kind, const std::string& input, const RunConfig& cfg,
                        const ValidityResult& r) {
  Json j;
  j["kind"] = kind;
  j["input"] = input;
  j["signature"] = cfg.sig;
  j["dim"] = cfg.dim;
  j["verdict"] = verdict_json(r);
  return j;
}

inline void emit(std::ostream& out, const RunConfig& cfg, const std::string& summary, const Json& doc) {
  if (cfg.json) {
    out << doc.dump(2) << '\n';
  } else {
    out << summary << '\n';
    out << doc.dump() << '\n';
  }
}

inline std::string summary(const ValidityResult& r) {
  std::string s = to_string(r.status) + " (" + to_string(r.method) + ")";
  if (!r.note.empty()) s += ": " + r.note;
  return s;
}

// ---------------------------------------------------------------------------
// Subcommands

inline int run_decide(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  const auto sig = cfg.signature();
  ValidityResult r;
  Json cert;
  if (is_quasi_equation_text(text)) {
    auto qe = parse_quasi_equation(text, sig);
    r = decide_quasi_equation(qe, sig, cfg.options());
    cert = certificate("quasi-equation", to_string(qe), cfg, r);
  } else {
    auto eq = parse_equation(text, sig);
    r = decide(eq, sig, cfg.options());
    cert = certificate("equation", to_string(eq), cfg, r);
  }
  emit(out, cfg, summary(r), cert);
  return exit_for(r.status);
}

inline Json model_json(const KripkeModel& m, const Point& state) {
  Json j = kripke_json(m);
  j["state"] = point_json(state);
  return j;
}

inline int run_countermodel(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  const auto sig = cfg.signature();
  const auto f = parse_formula(text, sig);
  const auto r = decide_formula(f, sig, cfg.options());
  Json doc = certificate("formula", to_string(f), cfg, r);
  if (r.invalid()) {
    auto [m, w] = countermodel_to_kripke(r, f);
    doc["kripke"] = model_json(m, w);
  }
  emit(out, cfg, summary(r), doc);
  return exit_for(r.status);
}

/// Satisfiable iff the negation is not valid; a countermodel to ~f is a model of f.
inline int run_sat(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  const auto sig = cfg.signature();
  const auto f = parse_formula(text, sig);
  const auto neg = Formula::negate(f);
  const auto r = decide_formula(neg, sig, cfg.options());
  Json doc;
  doc["formula"] = to_string(f);
  if (r.invalid()) {
    auto [m, w] = countermodel_to_kripke(r, neg);
    if (!satisfies(m, w, f)) throw std::logic_error("internal: model does not satisfy the formula");
    doc["result"] = "satisfiable";
    doc["model"] = model_json(m, w);
    doc["certificate"] = certificate("formula", to_string(neg), cfg, r);
    emit(out, cfg, "satisfiable", doc);
    return Ok;
  }
  doc["result"] = r.valid() ? "unsatisfiable" : "unknown";
  doc["certificate"] = certificate("formula", to_string(neg), cfg, r);
  emit(out, cfg, r.valid() ? "unsatisfiable" : "unknown", doc);
  return r.valid() ? Invalid : Unknown;
}

inline std::set<int> parse_shared(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.erase(item.begin());
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.pop_back();
    if (item.empty()) continue;
    if (item[0] == 'x') item.erase(item.begin());
    if (item.empty() || !std::all_of(item.begin(), item.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw Error("--shared expects a comma-separated list like x0,x1");
    out.insert(std::stoi(item));
  }
  return out;
}

inline int run_interpolate(const RunConfig& cfg, const std::string& a_text, const std::string& c_text,
                           const std::optional<std::string>& shared_text, std::ostream& out) {
  const auto sig = cfg.signature();
  const auto a = parse_term(a_text, sig);
  const auto c = parse_term(c_text, sig);
  std::optional<std::set<int>> shared;
  if (shared_text) shared = parse_shared(*shared_text);
  try {
    auto res = interpolate(a, c, sig, shared, cfg.options());
    Json doc;
    doc["a"] = to_string(a);
    doc["c"] = to_string(c);
    doc["shared"] = res.shared;
    doc["interpolant"] = to_string(res.interpolant);
    doc["lower"] = certificate("equation", to_string(below(a, res.interpolant)), cfg, res.lower);
    doc["upper"] = certificate("equation", to_string(below(res.interpolant, c)), cfg, res.upper);
    const bool ok = res.lower.valid() && res.upper.valid();
    emit(out, cfg, ok ? "interpolant: " + to_string(res.interpolant) : "unknown", doc);
    if (ok) return Ok;
    if (res.lower.invalid() || res.upper.invalid()) throw std::logic_error("internal: interpolant bound refuted");
    return Unknown;
  } catch (const PremiseNotValid& e) {
    Json doc;
    doc["a"] = to_string(a);
    doc["c"] = to_string(c);
    doc["result"] = "premise not valid";
    doc["certificate"] = certificate("equation", to_string(below(a, c)), cfg, e.result());
    emit(out, cfg, "premise a <= c is not valid", doc);
    return Invalid;
  }
}

inline int run_prove(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  const auto sig = cfg.signature();
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ParseError("expected '=' between the two words", text.size());
  const auto w1 = parse_word(text.substr(0, eq), sig.dim);
  SubstWord w2{sig.dim, {}};
  try {
    w2 = parse_word(text.substr(eq + 1), sig.dim);
  } catch (const ParseError& e) {
    throw ParseError("right-hand word: " + std::string(e.what()), eq + 1 + e.position());
  }
  for (const SubstWord* w : {&w1, static_cast<const SubstWord*>(&w2)})
    for (const auto& l : w->letters)
      if (!l.is_transpose() && !sig.replacements())
        throw Error("replacement " + l.to_string() + " is not in the signature " + cfg.sig);

  Json doc;
  doc["lhs"] = w1.to_string();
  doc["rhs"] = w2.to_string();
  doc["lhs_hat"] = transformation_json(hat(w1));
  doc["rhs_hat"] = transformation_json(hat(w2));
  if (hat(w1) == hat(w2)) {
    if (sig.kind == SigKind::TA) {
      auto [n1, t1] = coxeter_normal_form(w1);
      auto [n2, t2] = coxeter_normal_form(w2);
      if (!(n1 == n2) || !replay_trace(t1, sig.kind) || !replay_trace(t2, sig.kind))
        throw std::logic_error("internal: Coxeter traces disagree");
      doc["normal_form"] = n1.to_string();
      doc["lhs_trace"] = trace_json(t1);
      doc["rhs_trace"] = trace_json(t2);
    } else {
      doc["normal_form"] = decompose(hat(w1), sig.kind).to_string();
    }
    doc["result"] = "equal";
    emit(out, cfg, "equal", doc);
    return Ok;
  }
  const Equation weq{Term::apply_word(w1, Term::var(0)), Term::apply_word(w2, Term::var(0))};
  const auto r = decide_equation(weq, sig, cfg.options());
  if (!r.invalid()) throw std::logic_error("internal: words with different hats decided equal");
  doc["result"] = "different";
  doc["certificate"] = certificate("equation", to_string(weq), cfg, r);
  emit(out, cfg, "different", doc);
  return Invalid;
}

inline int run_free(const RunConfig& cfg, int gens, std::ostream& out) {
  const auto sig = cfg.signature();
  const auto h = build_free(sig, gens);
  const auto s = free_stats(h, cfg.seed, 12, cfg.samples);
  Json doc;
  doc["signature"] = cfg.sig;
  doc["dim"] = cfg.dim;
  doc["gens"] = gens;
  doc.update(free_stats_json(s));
  std::ostringstream line;
  line << "alphabet " << s.alphabet << ", atoms " << s.atoms << ", |Fr| = 2^" << s.atoms;
  emit(out, cfg, line.str(), doc);
  return s.unrealized == 0 ? Ok : Unknown;
}

inline int run_verify(const RunConfig& cfg, int dim_max, std::ostream& out) {
  if (dim_max < 2) throw Error("--dim-max must be at least 2");
  ReportOptions o;
  o.dim_max = dim_max;
  o.seed = cfg.seed;
  o.samples = cfg.samples;
  bool ok = false;
  const auto report = consistency_report(o, ok);
  emit(out, cfg, ok ? "all checks passed" : "some checks failed", report);
  return ok ? Ok : Invalid;
}

/// Re-checks a certificate document. Exit 0 if it stands, 1 if it is refuted.
inline int run_replay(const Json& doc, std::ostream& out, std::ostream& err) {
  const Json& cert = doc.contains("certificate") ? doc.at("certificate") : doc;
  RunConfig cfg;
  cfg.dim = cert.at("dim").get<int>();
  cfg.sig = cert.at("signature").get<std::string>();
  cfg.validate();
  const auto sig = cfg.signature();
  const auto kind = cert.at("kind").get<std::string>();
  const auto text = cert.at("input").get<std::string>();
  const auto& verdict = cert.at("verdict");
  const auto status = verdict.at("status").get<std::string>();
  cfg.seed = verdict.value("seed", std::uint64_t{0});

  QuasiEquation qe;
  std::optional<Formula> formula;
  if (kind == "equation") {
    qe = as_quasi_equation(parse_equation(text, sig));
  } else if (kind == "quasi-equation") {
    qe = parse_quasi_equation(text, sig);
  } else if (kind == "formula") {
    formula = parse_formula(text, sig);
    qe = as_quasi_equation(Equation{translate(*formula), Term::top()});
  } else {
    throw Error("replay: unknown certificate kind '" + kind + "'");
  }

  auto reject = [&](const std::string& why) {
    err << "rejected: " << why << '\n';
    out << "rejected\n";
    return Invalid;
  };

  if (status == "invalid") {
    if (verdict.at("countermodel").is_null()) return reject("invalid verdict without a countermodel");
    const auto cm = countermodel_from_json(verdict.at("countermodel"));
    if (cm.dim() != sig.dim) return reject("countermodel dimension differs from the claim");
    const bool member = sig.replacements() ? cm.unit->dipermutable() : cm.unit->permutable();
    if (!member) return reject("unit is not closed under the signature's substitutions");
    if (cm.kind != sig.kind) return reject("countermodel signature differs from the claim");
    std::string why;
    if (!replay(qe, cm, &why)) return reject(why);
    if (formula) {
      ValidityResult r;
      r.status = Status::Invalid;
      r.countermodel = cm;
      try {
        (void)countermodel_to_kripke(r, *formula);
      } catch (const Error& e) {
        return reject(e.what());
      }
    }
    out << "accepted\n";
    return Ok;
  }
  // valid and unknown verdicts are re-derived
  ValidityResult r = qe.premises.empty() ? decide(qe.conclusion, sig, cfg.options())
                                         : decide_quasi_equation(qe, sig, cfg.options());
  if (to_string(r.status) != status)
    return reject("re-deciding gives " + to_string(r.status) + ", certificate says " + status);
  out << "accepted\n";
  return Ok;
}

// ---------------------------------------------------------------------------

inline void add_config(CLI::App* app, RunConfig& cfg) {
  app->add_option("--dim", cfg.dim, "dimension n (at least 2)");
  app->add_option("--sig", cfg.sig, "signature")->check(CLI::IsMember({"TA", "SA", "SAD"}));
  app->add_option("--seed", cfg.seed, "seed for sampled checks");
  app->add_option("--budget-assignments", cfg.budget_assignments, "exhaustive assignment cap");
  app->add_option("--samples", cfg.samples, "random samples when the cap is exceeded");
  app->add_flag("--json", cfg.json, "pretty JSON output");
}

/// Runs one command. `args` excludes the program name.
inline int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decision procedures and certificates for substitution algebras", "subst"};
  app.require_subcommand(1);
  RunConfig cfg;

  std::vector<std::string> inputs;
  auto* decide_cmd = app.add_subcommand("decide", "decide an equation or quasi-equation (t1 = u1 ; ... => t = u)");
  auto* sat_cmd = app.add_subcommand("sat", "find a model of a formula");
  auto* cm_cmd = app.add_subcommand("countermodel", "decide a formula; print a falsifying Kripke model if invalid");
  auto* prove_cmd = app.add_subcommand("prove", "prove or refute word equality: <word1> = <word2>");
  for (auto* c : {decide_cmd, sat_cmd, cm_cmd, prove_cmd}) {
    add_config(c, cfg);
    c->add_option("input", inputs, "input text; read from stdin if absent");
  }

  std::string a_text, c_text;
  std::optional<std::string> shared;
  auto* interp_cmd = app.add_subcommand("interpolate", "interpolant b with a <= b <= c over the shared variables");
  add_config(interp_cmd, cfg);
  interp_cmd->add_option("a", a_text)->required();
  interp_cmd->add_option("c", c_text)->required();
  interp_cmd->add_option("--shared", shared, "shared variables, e.g. x0,x1");

  int gens = 1;
  bool stats = false;
  auto* free_cmd = app.add_subcommand("free", "free algebra statistics");
  add_config(free_cmd, cfg);
  free_cmd->add_option("--gens", gens, "number of generators")->check(CLI::PositiveNumber);
  free_cmd->add_flag("--stats", stats, "print atom and cardinality counts");

  int dim_max = 4;
  auto* verify_cmd = app.add_subcommand("verify-paper", "aggregate consistency report");
  add_config(verify_cmd, cfg);
  verify_cmd->add_option("--dim-max", dim_max, "largest dimension for the non-variety certificate");

  std::string replay_file;
  auto* replay_cmd = app.add_subcommand("replay", "re-check a certificate (file or stdin)");
  replay_cmd->add_option("file", replay_file, "certificate JSON; stdin if absent");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return Usage;
  }

  auto input_text = [&]() {
    std::string s = inputs.empty() ? read_all(in) : join(inputs);
    if (s.empty()) throw Error("no input");
    return s;
  };

  std::string current;
  try {
    if (!replay_cmd->parsed()) cfg.validate();
    if (decide_cmd->parsed()) return run_decide(cfg, current = input_text(), out);
    if (sat_cmd->parsed()) return run_sat(cfg, current = input_text(), out);
    if (cm_cmd->parsed()) return run_countermodel(cfg, current = input_text(), out);
    if (prove_cmd->parsed()) return run_prove(cfg, current = input_text(), out);
    if (interp_cmd->parsed()) return run_interpolate(cfg, a_text, c_text, shared, out);
    if (free_cmd->parsed()) return run_free(cfg, gens, out);
    if (verify_cmd->parsed()) return run_verify(cfg, dim_max, out);
    if (replay_cmd->parsed()) {
      Json doc;
      if (replay_file.empty()) {
        doc = Json::parse(read_all(in));
      } else {
        std::ifstream f(replay_file);
        if (!f) throw Error("cannot open " + replay_file);
        doc = Json::parse(f);
      }
      return run_replay(doc, out, err);
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    if (!current.empty() && e.position() <= current.size())
      err << "  " << current << "\n  " << std::string(e.position(), ' ') << "^\n";
    return Usage;
  } catch (const BudgetExceeded& e) {
    err << "unknown: budget exceeded: " << e.what() << '\n';
    return Unknown;
  } catch (const Json::exception& e) {
    err << "error: malformed certificate: " << e.what() << '\n';
    return Usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return Usage;
  }
  return Usage;
}

}  // namespace subst::cli
