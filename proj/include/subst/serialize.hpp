#pragma once

// JSON forms of units, verdicts, countermodels, models, traces and reports.
// Keys keep insertion order so equal inputs give byte-identical output.

#include "json.hpp"

#include "subst/decision.hpp"
#include "subst/free_algebra.hpp"
#include "subst/kripke.hpp"
#include "subst/perm.hpp"
#include "subst/representation.hpp"
#include "subst/set_algebra.hpp"

#include <string>

namespace subst {

using Json = nlohmann::ordered_json;

inline Json point_json(const Point& q) { return Json(q); }

inline Json transformation_json(const Transformation& t) {
  Json j = Json::array();
  for (auto v : t.images()) j.push_back(static_cast<int>(v));
  return j;
}

/// {"dim", "base", "unit": "square" | [point codes], "signature"}.
inline Json unit_json(const Unit& u, SigKind kind) {
  Json j;
  j["dim"] = u.dim();
  j["base"] = u.base();
  if (u.square()) {
    j["unit"] = "square";
  } else {
    Json pts = Json::array();
    for (auto p : u.points()) pts.push_back(p);
    j["unit"] = pts;
  }
  j["signature"] = to_string(kind);
  return j;
}

inline UnitPtr unit_from_json(const Json& j) {
  const int dim = j.at("dim").get<int>();
  const int base = j.at("base").get<int>();
  if (dim < 2) throw Error("unit: dim must be at least 2");
  const auto& u = j.at("unit");
  if (u.is_string()) {
    if (u.get<std::string>() != "square") throw Error("unit: expected \"square\" or a list of point codes");
    return square_unit(dim, base);
  }
  Bits m(ambient_points(dim, base));
  for (const auto& p : u) {
    const auto code = p.get<std::uint64_t>();
    if (code >= m.size()) throw Error("unit: point code out of range");
    m.set(code);
  }
  return make_unit(dim, base, std::move(m));
}

inline Json countermodel_json(const Countermodel& cm) {
  Json j;
  j["algebra"] = unit_json(*cm.unit, cm.kind);
  Json asg = Json::object();
  for (std::size_t i = 0; i < cm.assignment.size(); ++i) asg["x" + std::to_string(i)] = to_hex(cm.assignment[i]);
  j["assignment"] = asg;
  j["witness"] = point_json(cm.witness);
  return j;
}

inline Countermodel countermodel_from_json(const Json& j) {
  Countermodel cm;
  const auto& alg = j.at("algebra");
  cm.kind = parse_sig_kind(alg.at("signature").get<std::string>());
  cm.unit = unit_from_json(alg);
  const auto& asg = j.at("assignment");
  int bound = 0;
  for (auto it = asg.begin(); it != asg.end(); ++it) {
    const auto& key = it.key();
    if (key.size() < 2 || key[0] != 'x') throw Error("assignment keys must be x0, x1, ...");
    bound = std::max(bound, std::stoi(key.substr(1)) + 1);
  }
  cm.assignment.assign(static_cast<std::size_t>(bound), DenseSet::empty(cm.unit));
  for (auto it = asg.begin(); it != asg.end(); ++it)
    cm.assignment[std::stoi(it.key().substr(1))] =
        DenseSet(cm.unit, from_hex(it.value().get<std::string>(), cm.unit->ambient_size()));
  cm.witness = j.at("witness").get<Point>();
  return cm;
}

/// {"status", "method", "countermodel": {...} | null, "seed"}.
inline Json verdict_json(const ValidityResult& r) {
  Json j;
  j["status"] = to_string(r.status);
  j["method"] = to_string(r.method);
  j["countermodel"] = r.countermodel ? countermodel_json(*r.countermodel) : Json(nullptr);
  j["seed"] = r.seed;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

/// {"dim", "base", "unit", "valuation": {"p0": hex, ...}}.
inline Json kripke_json(const KripkeModel& m) {
  Json j;
  j["dim"] = m.unit->dim();
  j["base"] = m.unit->base();
  const auto u = unit_json(*m.unit, m.kind);
  j["unit"] = u["unit"];
  Json val = Json::object();
  for (const auto& [i, x] : m.valuation) val["p" + std::to_string(i)] = to_hex(x);
  j["valuation"] = val;
  return j;
}

inline Json trace_json(const ProofTrace& t) {
  Json j;
  j["start"] = t.start.to_string();
  j["end"] = t.end.to_string();
  Json steps = Json::array();
  for (const auto& s : t.steps) {
    Json st;
    st["rule"] = s.rule;
    st["position"] = s.position;
    st["removed"] = s.removed;
    st["result"] = s.result.to_string();
    steps.push_back(st);
  }
  j["steps"] = steps;
  return j;
}

inline Json free_stats_json(const FreeStats& s) {
  Json j;
  j["alphabet"] = s.alphabet;
  j["atoms"] = s.atoms;
  j["cardinality_log2_log2"] = s.alphabet;
  j["exhaustive"] = s.exhaustive;
  j["minterms_checked"] = s.checked;
  j["unrealized"] = s.unrealized;
  j["stated_bound_log2"] = s.alphabet;
  j["exceeds_stated_bound"] = s.cardinality > s.stated_bound;
  return j;
}

inline Json representation_report_json(const RepresentationReport& r) {
  Json j;
  j["homomorphism"] = r.homomorphism;
  j["injective"] = r.injective;
  j["atom_cover"] = r.atom_cover;
  j["meets_preserved"] = r.meets_preserved;
  j["omission"] = r.omission;
  j["preimages_principal"] = r.preimages_principal;
  j["exhaustive"] = r.exhaustive;
  j["elements_checked"] = r.elements_checked;
  j["subsets_checked"] = r.subsets_checked;
  j["failures"] = r.failures;
  return j;
}

inline Json non_variety_json(const NonVarietyCertificate& c) {
  Json j;
  j["n"] = c.n;
  j["f"] = transformation_json(c.f);
  Json stated;
  stated["G"] = unit_json(*c.stated_g, SigKind::TA);
  stated["X"] = to_hex(c.stated_x);
  stated["sf_x_equals_complement"] = c.stated_witness_holds;
  j["stated_witness"] = stated;
  Json w;
  w["G"] = unit_json(*c.g, SigKind::TA);
  w["X"] = to_hex(c.x);
  w["sf_x_equals_complement"] = c.witness_holds;
  w["repaired"] = c.repaired;
  j["witness"] = w;
  Json small = Json::array();
  for (const auto& s : c.small) {
    Json e;
    e["k"] = s.k;
    e["sigma_holds"] = s.holds;
    e["method"] = s.exhaustive ? "exhaustive" : "constant-point+sampled";
    e["constant_point_lemma"] = s.constant_point_lemma;
    e["checked"] = s.checked;
    small.push_back(e);
  }
  j["small_algebras"] = small;
  j["ok"] = c.ok();
  return j;
}

}  // namespace subst
