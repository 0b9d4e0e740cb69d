#pragma once

// JSON encodings of every input and report. Rationals always travel as
// "p/q" strings; the only decimals are *_float rendering fields.

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

#include "dyadic.hpp"
#include "ell1.hpp"
#include "probes.hpp"
#include "renorm.hpp"
#include "ured.hpp"
#include "witness.hpp"

namespace l1renorm::io {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- inputs

inline Rational rational_from_json(const json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const parse_error& e) {
      throw parse_error(where + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw parse_error(where + ": expected a rational string \"p/q\"");
}

inline std::vector<Rational> rationals_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw parse_error(where + ": expected an array of rational strings");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(rational_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw parse_error(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw parse_error(where + ": missing field \"" + key + "\"");
  return *it;
}

inline int int_from_json(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw parse_error(where + ": expected an integer");
  return j.get<int>();
}

/// {"level": K, "values": ["p/q", ...]} with exactly 2^K entries.
inline DyadicStep step_from_json(const json& j, const std::string& where = "$") {
  const int level = int_from_json(field(j, "level", where), where + ".level");
  if (level < 0 || level > kMaxLevel)
    throw parse_error(where + ".level: must lie in 0.." + std::to_string(kMaxLevel));
  const json& vals = field(j, "values", where);
  if (!vals.is_array()) throw parse_error(where + ".values: expected an array");
  if (vals.size() != cells_at(level))
    throw parse_error(where + ".values: level " + std::to_string(level) + " needs " +
                      std::to_string(cells_at(level)) + " entries, got " + std::to_string(vals.size()));
  return DyadicStep(level, rationals_from_json(vals, where + ".values"));
}

inline DyadicIndex index_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw parse_error(where + ": expected [k, j]");
  DyadicIndex idx{int_from_json(j[0], where + "[0]"), 0};
  if (!j[1].is_number_integer()) throw parse_error(where + "[1]: expected an integer");
  idx.j = j[1].get<long>();
  try {
    idx.validate();
  } catch (const precondition_error& e) {
    throw parse_error(where + ": " + e.what());
  }
  return idx;
}

/// {"center": f, "functionals": [h...], "delta": "p/q"}.
inline WeakNbhd nbhd_from_json(const json& j, const std::string& where = "$") {
  WeakNbhd n;
  n.center = step_from_json(field(j, "center", where), where + ".center");
  if (j.contains("functionals")) {
    const json& hs = j["functionals"];
    if (!hs.is_array()) throw parse_error(where + ".functionals: expected an array");
    for (std::size_t l = 0; l < hs.size(); ++l)
      n.functionals.push_back(step_from_json(hs[l], where + ".functionals[" + std::to_string(l) + "]"));
  }
  n.delta = rational_from_json(field(j, "delta", where), where + ".delta");
  return n;
}

// ---------------------------------------------------------------- outputs

inline json to_json(const Rational& r) { return r.str(); }

inline json to_json(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& r : v) a.push_back(r.str());
  return a;
}

inline json to_json(const DyadicStep& f) {
  json vals = json::array();
  for (const auto& v : f.values()) vals.push_back(v.str());
  return json{{"level", f.level()}, {"values", std::move(vals)}};
}

inline json to_json(const DyadicIndex& idx) { return json::array({idx.k, idx.j}); }

inline json to_json(const Check& c) {
  return json{{"lhs", c.lhs.str()}, {"rhs", c.rhs.str()}, {"ok", c.ok}};
}

inline json to_json(const std::vector<Check>& checks) {
  json o = json::object();
  for (const auto& c : checks) o[c.name] = to_json(c);
  return o;
}

inline json to_json(const NormSqReport& r) {
  return json{{"tnorm_sq", r.tnorm_sq.str()},
              {"l1", r.l1.str()},
              {"linf", r.linf.str()},
              {"tnorm_float", r.tnorm_float},
              {"equiv_ok", r.equiv_ok}};
}

inline json to_json(const EquivalenceReport& r) {
  return json{{"l1_sq", r.l1_sq.str()},         {"tnorm_sq", r.tnorm_sq.str()},
              {"upper_sqrt2_sq", r.upper_sqrt2_sq.str()}, {"upper_sharp_sq", r.upper_sharp_sq.str()},
              {"lower_ok", r.lower_ok},          {"upper_ok", r.upper_ok},
              {"sharp_ok", r.sharp_ok}};
}

inline json to_json(const SplitPair& sp) {
  return json{{"K", sp.K}, {"b", to_json(sp.b)}, {"c", to_json(sp.c)}, {"f1", to_json(sp.f1)}, {"f2", to_json(sp.f2)}};
}

inline json to_json(const WitnessReport& r, int float_digits = 12) {
  return json{{"gamma", r.gamma.str()},
              {"K", r.K},
              {"eps", r.epsilon.str()},
              {"center_tnorm_sq", r.center_tnorm_sq.str()},
              {"guaranteed_gap_sq", r.guaranteed_gap_sq.str()},
              {"gap_sq", r.gap_sq.str()},
              {"gap_float", sqrt_decimal(r.gap_sq, float_digits)},
              {"pair", to_json(r.pair)},
              {"g1", to_json(r.g1)},
              {"g2", to_json(r.g2)},
              {"checks", to_json(r.checks)},
              {"ok", r.ok()}};
}

inline json to_json(const EqualityCase& e) {
  json o{{"tag", e.degenerate() ? "Degenerate" : "Strict"}};
  if (e.degenerate()) o["ratio"] = e.ratio.str();
  o["zero_operand"] = e.zero_operand;
  return o;
}

inline json to_json(const ExtremeFailureWitness& x) {
  return json{{"gamma", x.gamma.str()},
              {"K", x.K},
              {"center", to_json(x.center)},
              {"u", to_json(x.u)},
              {"ball_check_sq", json::array({x.plus_tnorm_sq.str(), x.minus_tnorm_sq.str()})},
              {"l1_of_u", x.l1_of_u.str()},
              {"l1_of_f", x.l1_of_f.str()},
              {"weak_size_at_K", x.weak_size_at_K.str()},
              {"ok", x.ok()}};
}

inline json to_json(const ChainReport& c) {
  return json{{"l1_sum", c.l1_sum.str()},           {"l1_diff", c.l1_diff.str()},
              {"l1_f", c.l1_f.str()},               {"int_A_abs_g", c.int_A_abs_g.str()},
              {"int_A_abs_f", c.int_A_abs_f.str()}, {"lhs", c.lhs.str()},
              {"rhs", c.rhs.str()},                 {"ok", c.ok}};
}

inline json to_json(const DualEstimate& d) {
  json o{{"value_sq", d.value_sq.str()},
         {"value_sq_float", d.value_sq.to_double()},
         {"pairing_sq", d.pairing_sq.str()},
         {"maximizer_tnorm_sq", d.maximizer_tnorm_sq.str()},
         {"maximizer", to_json(d.maximizer)},
         {"certified_optimal", d.certified_optimal},
         {"converged", d.converged},
         {"iterations", d.iterations}};
  if (d.upper_sq) o["upper_sq"] = d.upper_sq->str();
  return o;
}

inline json to_json(const SpikeFamily& fam) {
  json members = json::array();
  for (const auto& x : fam.members) members.push_back(to_json(x));
  json supports = json::array();
  for (const auto& s : fam.supports) supports.push_back(to_json(s));
  json o{{"deltas", to_json(fam.deltas)}, {"members", std::move(members)}};
  if (!fam.eps.empty()) o["eps"] = to_json(fam.eps);
  if (!fam.supports.empty()) o["supports"] = std::move(supports);
  return o;
}

inline json to_json(const Ell1Check& c) {
  return json{{"norm", c.norm.str()},     {"lower", c.lower.str()},       {"upper", c.upper.str()},
              {"lower_ok", c.lower_ok},   {"upper_ok", c.upper_ok},       {"lower_tight", c.lower_tight}};
}

inline json to_json(const DualPair& dp) {
  json table = json::array();
  for (const auto& [px, py] : dp.pairings) table.push_back(json::array({px.str(), py.str()}));
  return json{{"xstar", to_json(dp.xstar)},
              {"ystar", to_json(dp.ystar)},
              {"pairings", std::move(table)},
              {"linf_xstar", dp.linf_x.str()},
              {"linf_ystar", dp.linf_y.str()},
              {"linf_mid", dp.linf_mid.str()},
              {"linf_diff", dp.linf_diff.str()},
              {"segment_ok", dp.segment_ok()},
              {"pattern_ok", dp.pattern_ok}};
}

inline json to_json(const std::vector<NonsmoothRow>& rows) {
  json a = json::array();
  for (const auto& r : rows)
    a.push_back(json{{"i", r.i},
                     {"odd_pairing", r.odd_pairing.str()},
                     {"even_pairing", r.even_pairing.str()},
                     {"gap", r.gap.str()},
                     {"expected", r.expected.str()},
                     {"ok", r.ok}});
  return a;
}

inline json to_json(const SparseSeq& s) {
  json o = json::object();
  for (const auto& [i, v] : s.coords()) o[std::to_string(i)] = v.str();
  return o;
}

inline json to_json(const std::vector<ClaimCheck>& checks) {
  json o = json::object();
  for (const auto& c : checks) {
    if (!o.contains(c.name)) o[c.name] = json{{"ok", true}, {"entries", json::array()}};
    auto& slot = o[c.name];
    slot["ok"] = slot["ok"].get<bool>() && c.ok;
    slot["entries"].push_back(
        json{{"n", c.n}, {"m", c.m}, {"lhs", c.lhs.str()}, {"rhs", c.rhs.str()}, {"ok", c.ok}});
  }
  return o;
}

inline json to_json(const RecursionRun& run, const std::vector<ClaimCheck>& checks) {
  json xs = json::array();
  for (const auto& x : run.xs) xs.push_back(to_json(x));
  json stars = json::array();
  for (long c : run.xstars) stars.push_back(c);
  return json{{"delta", run.delta.str()}, {"eps", to_json(run.eps)}, {"z", to_json(run.z)},
              {"xs", std::move(xs)},      {"xstars", std::move(stars)}, {"checks", to_json(checks)}};
}

inline json to_json(const std::vector<SegmentPoint>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(json{{"t", p.t.str()}, {"norm", p.norm.str()}, {"ok", p.ok}});
  return a;
}

}  // namespace l1renorm::io
