// l1renorm: batch front-end for the renormed L1 toolkit.
//
// Exit status: 0 success, 1 a verification failed (including an unsatisfiable
// gap condition), 2 bad input.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "l1renorm/json_io.hpp"
#include "l1renorm/l1renorm.hpp"
#include "l1renorm/random.hpp"
#include "l1renorm/selftest.hpp"

namespace {

using l1renorm::Rational;
using json = l1renorm::io::json;

constexpr int kOk = 0;
constexpr int kVerificationFailed = 1;
constexpr int kInputError = 2;

struct RunConfig {
  std::string input;
  std::string out;
  std::uint64_t seed = 1;
  std::string eps;
  std::string delta;
  std::string prec;
  std::string t_grid = "0,1/4,1/2,3/4,1";
  std::string schedule = "tight";
  int level = -1;
  int steps = -1;
  int float_digits = 12;
  int trials = 0;
};

json read_json(const std::string& path) {
  if (path.empty()) throw l1renorm::parse_error("--input is required");
  std::ifstream in(path);
  if (!in) throw l1renorm::parse_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw l1renorm::parse_error(path + ": " + e.what());
  }
}

std::vector<Rational> parse_list(const std::string& text, const char* flag) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(Rational::parse(item));
    } catch (const l1renorm::parse_error& e) {
      throw l1renorm::parse_error(std::string(flag) + ": " + e.what());
    }
  }
  if (out.empty()) throw l1renorm::parse_error(std::string(flag) + ": empty list");
  return out;
}

Rational parse_flag(const std::string& text, const char* flag) {
  if (text.empty()) throw l1renorm::parse_error(std::string(flag) + " is required");
  try {
    return Rational::parse(text);
  } catch (const l1renorm::parse_error& e) {
    throw l1renorm::parse_error(std::string(flag) + ": " + e.what());
  }
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(cfg.out, std::ios::binary);
  if (!os) throw l1renorm::parse_error("cannot write " + cfg.out);
  os << text;
}

void emit(const RunConfig& cfg, const json& j) { emit(cfg, j.dump(2) + "\n"); }

l1renorm::WeakNbhd load_nbhd(const RunConfig& cfg) {
  auto n = l1renorm::io::nbhd_from_json(read_json(cfg.input));
  if (!cfg.delta.empty()) n.delta = parse_flag(cfg.delta, "--delta");
  if (!cfg.prec.empty()) n.center = l1renorm::near_unit_scale(n.center, parse_flag(cfg.prec, "--prec"));
  return n;
}

std::pair<l1renorm::DyadicStep, l1renorm::DyadicStep> load_pair(const RunConfig& cfg) {
  const json j = read_json(cfg.input);
  return {l1renorm::io::step_from_json(l1renorm::io::field(j, "f", "$"), "$.f"),
          l1renorm::io::step_from_json(l1renorm::io::field(j, "g", "$"), "$.g")};
}

int cmd_norm(const RunConfig& cfg) {
  const auto f = l1renorm::io::step_from_json(read_json(cfg.input));
  const auto r = l1renorm::norm_report(f, cfg.float_digits);
  emit(cfg, l1renorm::io::to_json(r));
  return r.equiv_ok ? kOk : kVerificationFailed;
}

int cmd_split(const RunConfig& cfg) {
  const auto f = l1renorm::io::step_from_json(read_json(cfg.input));
  const int K = cfg.level >= 0 ? cfg.level : f.level();
  const auto sp = l1renorm::split_pair(f, K);
  const auto checks = l1renorm::split_identities(f, sp);
  json j = l1renorm::io::to_json(sp);
  j["checks"] = l1renorm::io::to_json(checks);
  j["ok"] = l1renorm::all_ok(checks);
  emit(cfg, j);
  return l1renorm::all_ok(checks) ? kOk : kVerificationFailed;
}

int cmd_witness(const RunConfig& cfg) {
  const auto n = load_nbhd(cfg);
  const auto w = l1renorm::d2p_witness(n, parse_flag(cfg.eps, "--eps"));
  emit(cfg, l1renorm::io::to_json(w, cfg.float_digits));
  return w.ok() ? kOk : kVerificationFailed;
}

int cmd_probe(const std::string& which, const RunConfig& cfg) {
  if (which == "strict") {
    const auto [f, g] = load_pair(cfg);
    emit(cfg, l1renorm::io::to_json(l1renorm::triangle_equality_case(f, g)));
    return kOk;
  }
  if (which == "midpoint") {
    const auto [f, g] = load_pair(cfg);
    const Rational d = l1renorm::midpoint_defect(f, g);
    const bool ok = d.sign() >= 0 && (d.is_zero() == (f == g));
    emit(cfg, json{{"defect", d.str()}, {"equal", f == g}, {"ok", ok}});
    return ok ? kOk : kVerificationFailed;
  }
  if (which == "extreme") {
    const auto x = l1renorm::strong_extreme_failure(load_nbhd(cfg), parse_flag(cfg.eps, "--eps"));
    emit(cfg, l1renorm::io::to_json(x));
    return x.ok() ? kOk : kVerificationFailed;
  }
  if (which == "chain") {
    const json j = read_json(cfg.input);
    const auto f = l1renorm::io::step_from_json(l1renorm::io::field(j, "f", "$"), "$.f");
    const auto g = l1renorm::io::step_from_json(l1renorm::io::field(j, "g", "$"), "$.g");
    std::vector<l1renorm::DyadicIndex> A;
    if (j.contains("A")) {
      if (!j["A"].is_array()) throw l1renorm::parse_error("$.A: expected an array of [k, j] pairs");
      for (std::size_t i = 0; i < j["A"].size(); ++i)
        A.push_back(l1renorm::io::index_from_json(j["A"][i], "$.A[" + std::to_string(i) + "]"));
    }
    const auto c = l1renorm::perturbation_l1_chain(f, g, A);
    emit(cfg, l1renorm::io::to_json(c));
    return c.ok ? kOk : kVerificationFailed;
  }
  if (which == "slice") {
    const auto entries =
        l1renorm::slice_diameter_lb(load_nbhd(cfg), parse_list(cfg.eps, "--eps"), cfg.float_digits);
    emit(cfg, l1renorm::slice_csv(entries));
    bool ok = true;
    for (const auto& e : entries) {
      if (!e.gap_sq) {
        std::cerr << "eps=" << e.eps << ": " << e.error << "\n";
        ok = false;
      } else {
        ok = ok && *e.gap_sq <= Rational(4);
      }
    }
    return ok ? kOk : kVerificationFailed;
  }
  if (which == "weak") {
    const auto u = l1renorm::io::step_from_json(read_json(cfg.input));
    const int depth = cfg.level >= 0 ? cfg.level : u.level();
    const Rational w = l1renorm::weak_smallness(u, depth);
    emit(cfg, json{{"depth", depth}, {"weak_smallness", w.str()}, {"l1", l1renorm::l1_norm(u).str()}});
    return kOk;
  }
  if (which == "dual") {
    const auto h = l1renorm::io::step_from_json(read_json(cfg.input));
    const int L = cfg.level >= 0 ? cfg.level : h.level();
    const Rational tol = cfg.eps.empty() ? Rational(1, 1000000000) : parse_flag(cfg.eps, "--eps");
    emit(cfg, l1renorm::io::to_json(l1renorm::dual_norm_estimate(h, L, tol)));
    return kOk;
  }
  throw l1renorm::parse_error("unknown probe " + which);
}

std::vector<std::vector<Rational>> sample_vectors(const json& j, const RunConfig& cfg, std::size_t m) {
  std::vector<std::vector<Rational>> out;
  if (j.contains("samples")) {
    const json& s = j["samples"];
    if (!s.is_array()) throw l1renorm::parse_error("$.samples: expected an array of coefficient arrays");
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto v = l1renorm::io::rationals_from_json(s[i], "$.samples[" + std::to_string(i) + "]");
      if (v.size() > m) throw l1renorm::parse_error("$.samples[" + std::to_string(i) + "]: too many coefficients");
      out.push_back(std::move(v));
    }
  }
  l1renorm::TrialRng rng(cfg.seed);
  for (int t = 0; t < cfg.trials; ++t) {
    std::vector<Rational> v;
    for (std::size_t k = 0; k < m; ++k) v.push_back(rng.rational(16, 8));
    out.push_back(std::move(v));
  }
  return out;
}

int cmd_ell1(const std::string& which, const RunConfig& cfg) {
  const json j = read_json(cfg.input);
  const auto deltas = l1renorm::io::rationals_from_json(l1renorm::io::field(j, "deltas", "$"), "$.deltas");
  const std::size_t m = j.contains("m") ? static_cast<std::size_t>(l1renorm::io::int_from_json(j["m"], "$.m"))
                                        : deltas.size();
  l1renorm::SpikeFamily fam;
  if (which == "greedy") {
    std::string sched = j.contains("schedule") ? j["schedule"].get<std::string>() : cfg.schedule;
    if (sched != "tight" && sched != "geometric")
      throw l1renorm::parse_error("schedule must be tight or geometric");
    fam = l1renorm::greedy_asymptotic_ell1(
        deltas, m, sched == "tight" ? l1renorm::EpsSchedule::Tight : l1renorm::EpsSchedule::Geometric);
  } else if (which == "spikes" || which == "dual") {
    int K = cfg.level;
    if (K < 0) K = j.contains("level") ? l1renorm::io::int_from_json(j["level"], "$.level") : 0;
    fam = l1renorm::disjoint_spike_family(deltas, m, K);
  } else {
    throw l1renorm::parse_error("unknown ell1 command " + which);
  }

  json report{{"family", l1renorm::io::to_json(fam)}};
  bool ok = true;
  if (which == "dual") {
    const auto dp = l1renorm::dual_segment(fam);
    const auto rows = l1renorm::nonsmooth_pairings(fam, dp);
    report["dual"] = l1renorm::io::to_json(dp);
    report["nonsmooth"] = l1renorm::io::to_json(rows);
    ok = dp.ok();
    for (const auto& r : rows) ok = ok && r.ok;
  } else {
    json checks = json::array();
    for (const auto& alpha : sample_vectors(j, cfg, m)) {
      const auto c = l1renorm::ell1_bounds(fam, alpha);
      json row = l1renorm::io::to_json(c);
      row["alpha"] = l1renorm::io::to_json(alpha);
      checks.push_back(std::move(row));
      ok = ok && c.lower_ok && c.upper_ok && (which != "spikes" || c.lower_tight);
    }
    report["checks"] = std::move(checks);
  }
  report["ok"] = ok;
  emit(cfg, report);
  return ok ? kOk : kVerificationFailed;
}

int cmd_ured(const RunConfig& cfg) {
  const Rational delta = cfg.delta.empty() ? Rational(1, 2) : parse_flag(cfg.delta, "--delta");
  std::vector<Rational> eps;
  if (cfg.eps.empty()) {
    const int steps = cfg.steps >= 0 ? cfg.steps : 10;
    for (long n = 1; n <= steps; ++n) eps.push_back(l1renorm::pow2(-n));
  } else {
    eps = parse_list(cfg.eps, "--eps");
  }
  const std::size_t steps = cfg.steps >= 0 ? static_cast<std::size_t>(cfg.steps) : eps.size();
  const auto run = l1renorm::ured_recursion(delta, eps, steps);
  const auto checks = l1renorm::verify_claim(run);
  const auto seg = l1renorm::segment_check(run, parse_list(cfg.t_grid, "--t-grid"), steps);
  json j = l1renorm::io::to_json(run, checks);
  j["segment"] = l1renorm::io::to_json(seg);
  bool ok = true;
  for (const auto& c : checks) ok = ok && c.ok;
  for (const auto& p : seg) ok = ok && p.ok;
  j["ok"] = ok;
  emit(cfg, j);
  return ok ? kOk : kVerificationFailed;
}

int cmd_selftest(const RunConfig& cfg) {
  const int trials = cfg.trials > 0 ? cfg.trials : 50;
  const auto results = l1renorm::run_selftest(cfg.seed, trials);
  json arr = json::array();
  bool ok = true;
  for (const auto& r : results) {
    json row{{"name", r.name}, {"trials", r.trials}, {"failures", r.failures}};
    if (!r.ok()) row["first_failure"] = r.first_failure;
    arr.push_back(std::move(row));
    ok = ok && r.ok();
  }
  emit(cfg, json{{"seed", cfg.seed}, {"trials", trials}, {"invariants", std::move(arr)}, {"ok", ok}});
  return ok ? kOk : kVerificationFailed;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--input", cfg.input, "input JSON file");
  sub->add_option("--out", cfg.out, "write the report here instead of stdout");
  sub->add_option("--seed", cfg.seed, "seed for randomized trials");
  sub->add_option("--eps", cfg.eps, "epsilon (comma-separated list for schedules)");
  sub->add_option("--delta", cfg.delta, "neighbourhood or recursion delta");
  sub->add_option("--level", cfg.level, "dyadic level");
  sub->add_option("--prec", cfg.prec, "rescale the center to near-unit norm with this precision");
  sub->add_option("--float-digits", cfg.float_digits, "digits in decimal renderings");
  sub->add_option("--trials", cfg.trials, "number of random trials");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact toolkit for the strictly convex renorming of L1[0,1]"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string probe_kind, ell1_kind;

  auto* norm = app.add_subcommand("norm", "squared norm report of a step function");
  auto* split = app.add_subcommand("split", "split a function into the f1, f2 pair at level K");
  auto* witness = app.add_subcommand("witness", "diameter-two witness in a weak neighbourhood");
  auto* probe = app.add_subcommand("probe", "rotundity probes");
  auto* ell1 = app.add_subcommand("ell1", "octahedral and l1 constructions in (L1, ||.||_1)");
  auto* ured = app.add_subcommand("ured", "non-URED recursion on sup-norm sequences");
  auto* selftest = app.add_subcommand("selftest", "run the invariant suite");
  for (auto* s : {norm, split, witness, probe, ell1, ured, selftest}) add_common(s, cfg);
  probe->add_option("kind", probe_kind, "strict|midpoint|extreme|chain|slice|weak|dual")
      ->required()
      ->check(CLI::IsMember({"strict", "midpoint", "extreme", "chain", "slice", "weak", "dual"}));
  ell1->add_option("kind", ell1_kind, "greedy|spikes|dual")
      ->required()
      ->check(CLI::IsMember({"greedy", "spikes", "dual"}));
  ell1->add_option("--schedule", cfg.schedule, "tight|geometric epsilon schedule for greedy");
  ured->add_option("--steps", cfg.steps, "number of recursion steps");
  ured->add_option("--t-grid", cfg.t_grid, "comma-separated t values in [0,1]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*norm) return cmd_norm(cfg);
    if (*split) return cmd_split(cfg);
    if (*witness) return cmd_witness(cfg);
    if (*probe) return cmd_probe(probe_kind, cfg);
    if (*ell1) return cmd_ell1(ell1_kind, cfg);
    if (*ured) return cmd_ured(cfg);
    if (*selftest) return cmd_selftest(cfg);
  } catch (const l1renorm::gap_condition_error& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const l1renorm::schedule_infeasible& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const l1renorm::error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
