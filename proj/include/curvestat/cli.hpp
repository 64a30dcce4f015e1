#pragma once

/**
 * @file cli.hpp
 * @brief The `curvestat` command-line front end.
 *
 * Exit codes: 0 success, 1 hypothesis or validation failure, 2 usage error.
 */

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvestat/acceptance.hpp"
#include "curvestat/charsum.hpp"
#include "curvestat/curvewin.hpp"
#include "curvestat/experiment.hpp"
#include "curvestat/report.hpp"
#include "curvestat/rwalk.hpp"

namespace curvestat::cli {

/// A malformed command line or config file (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

inline i64 parse_i64(const std::string& s, const std::string& field) {
  const std::string t = trim(s);
  try {
    std::size_t used = 0;
    const long long v = std::stoll(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw UsageError("--" + field + ": expected an integer, got '" + t + "'");
  }
}

inline u64 parse_u64(const std::string& s, const std::string& field) {
  const i64 v = parse_i64(s, field);
  if (v < 0) throw UsageError("--" + field + ": expected a nonnegative integer, got '" + trim(s) + "'");
  return static_cast<u64>(v);
}

inline std::vector<i64> parse_i64_list(const std::string& s, const std::string& field) {
  if (trim(s).empty()) throw UsageError("--" + field + ": empty list");
  std::vector<i64> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_i64(part, field));
  return out;
}

inline std::vector<u64> parse_u64_list(const std::string& s, const std::string& field) {
  if (trim(s).empty()) throw UsageError("--" + field + ": empty list");
  std::vector<u64> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_u64(part, field));
  return out;
}

inline Beta parse_beta(const std::string& s) {
  const auto parts = split(s, '/');
  if (parts.size() != 2) throw UsageError("--beta: expected a fraction num/den, got '" + s + "'");
  return {parse_u64(parts[0], "beta"), parse_u64(parts[1], "beta")};
}

inline std::vector<std::string> json_to_results(const Json& v, const std::string& key) {
  auto scalar = [&](const Json& x) -> std::string {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_number_integer() || x.is_number_unsigned()) return x.dump();
    if (x.is_boolean()) return x.get<bool>() ? "true" : "false";
    throw UsageError("config key '" + key + "': unsupported value " + x.dump());
  };
  auto joined = [&](const Json& arr) {
    std::string s;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number_integer() && !arr[i].is_number_unsigned()) {
        throw UsageError("config key '" + key + "': list entries must be integers");
      }
      s += (i ? "," : "") + arr[i].dump();
    }
    return s;
  };
  if (!v.is_array()) return {scalar(v)};
  if (v.empty()) throw UsageError("config key '" + key + "': empty list");
  if (v.front().is_array()) {
    std::vector<std::string> out;
    for (const auto& inner : v) {
      if (!inner.is_array()) throw UsageError("config key '" + key + "': mixed list");
      out.push_back(joined(inner));
    }
    return out;
  }
  if (v.front().is_string()) {
    std::vector<std::string> out;
    for (const auto& s : v) out.push_back(scalar(s));
    return out;
  }
  return {joined(v)};
}

/// Every option any subcommand may carry; unused fields stay at defaults.
struct Options {
  std::string config;
  std::string format = "json";
  std::string out;
  unsigned threads = 1;

  u64 p = 0;
  u64 ell = 2;
  u64 m = 2;
  std::vector<std::string> polys;
  u64 I = 0;
  u64 L = 0;
  u64 x_start = 0;
  u64 scan_len = 0;
  u64 x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
  std::string beta = "1/2";
  u64 seed = 0;
  u64 trials = 500;
  u64 blocks = 0;
  bool waive = false;
  std::string part = "a";
  u64 k = 2;
  u64 lo = 0, hi = 0;
  u64 twist = 0;
  u64 stride = 1;
  std::string offsets;
  u64 N = 0;
  std::string targets;
  bool theorem = false;
  std::string shifts;
  std::string windows = "10,20,40,80";
  u64 mu = 1;
  std::string only;
};

namespace detail {

inline Json poly_echo(const std::vector<std::vector<i64>>& cs) {
  Json arr = Json::array();
  for (const auto& c : cs) arr.push_back(c);
  return arr;
}

inline bool given(CLI::App* sub, const std::string& name) { return sub->get_option("--" + name)->count() > 0; }

inline void require(CLI::App* sub, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (!given(sub, n)) throw UsageError("missing required option --" + std::string(n));
  }
}

inline void merge_config(CLI::App* sub, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("--config: cannot read '" + path + "'");
  Json j;
  try {
    j = Json::parse(f);
  } catch (const std::exception& e) {
    throw UsageError("--config: invalid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw UsageError("--config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    CLI::Option* opt = name == "config" ? nullptr : sub->get_option_no_throw("--" + name);
    if (opt == nullptr) throw UsageError("config: unknown key '" + key + "' for command " + sub->get_name());
    if (opt->count() > 0) continue;
    try {
      for (const auto& r : json_to_results(value, key)) opt->add_result(r);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config key '" + key + "': " + e.what());
    }
  }
}

inline std::vector<std::vector<i64>> poly_coeffs(const Options& o) {
  std::vector<std::vector<i64>> out;
  for (const auto& s : o.polys) out.push_back(parse_i64_list(s, "poly"));
  return out;
}

inline std::vector<Poly> make_polys(const std::vector<std::vector<i64>>& cs, u64 p) {
  std::vector<Poly> out;
  for (const auto& c : cs) out.push_back(Poly::from_signed(c, p));
  return out;
}

inline ScanSpec scan_from(CLI::App* sub, const Options& o, u64 tail) {
  ScanSpec s{o.x_start, o.scan_len, o.I, o.L};
  if (!given(sub, "scan-len")) {
    const u128 used = static_cast<u128>(o.x_start) + o.I + tail;
    if (used >= o.p) throw std::invalid_argument("scan: x-start + I leaves no room for a window position");
    s.scan_len = static_cast<u64>(o.p - used);
  }
  return s;
}

inline Json scan_echo(const ScanSpec& s) {
  return Json{{"I", s.window}, {"L", s.block}, {"x_start", s.x_start}, {"scan_len", s.scan_len}};
}

inline Json rect_echo(const Rect& r) {
  return Json{{"x_lo", r.x.lo}, {"x_hi", r.x.hi}, {"y_lo", r.y.lo}, {"y_hi", r.y.hi}};
}

inline std::string join(const std::vector<std::uint32_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace detail

/// Parses `args` (without the program name), runs the command, writes the
/// report to `out` or --out and diagnostics to `err`.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"curvestat: statistics of points on y^l = P(x) over F_p", "curvestat"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CURVESTAT_VERSION));
  app.footer(
      "Polynomials are comma-separated coefficients, constant term first: --poly 1,0,1 is x^2+1.\n"
      "Exit codes: 0 success, 1 hypothesis/validation failure, 2 usage error.");

  auto common = [&](CLI::App* s) {
    s->add_option("--config", o.config, "JSON file of option values; command-line flags override it");
    s->add_option("--format", o.format, "Output format: csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--out", o.out, "Output path (default: stdout)");
    s->add_option("--threads", o.threads, "Worker threads (results do not depend on it)")->check(CLI::Range(1U, 1024U));
  };
  auto curve = [&](CLI::App* s, bool many) {
    s->add_option("--p", o.p, "Odd prime");
    s->add_option("--ell", o.ell, "Exponent l in y^l = P(x)");
    auto* po = s->add_option("--poly", o.polys, many ? "Polynomial (repeat once per curve)" : "Polynomial");
    if (!many) po->expected(1);
  };
  auto scan = [&](CLI::App* s) {
    s->add_option("--m", o.m, "Modulus of the residue histogram");
    s->add_option("--I", o.I, "Window length I");
    s->add_option("--x-start", o.x_start, "First window position (default 0)");
    s->add_option("--scan-len", o.scan_len, "Number of window positions (default: as many as fit)");
  };
  auto theorem = [&](CLI::App* s) {
    s->add_option("--L", o.L, "Block length L");
    s->add_option("--trials", o.trials, "Model trials (default 500)");
    s->add_option("--seed", o.seed, "Model seed (required)");
    s->add_flag("--waive-asymptotic", o.waive, "Record the size hypotheses on L and |I| as waived");
  };
  auto rect = [&](CLI::App* s) {
    s->add_option("--x-lo", o.x_lo, "Rectangle x from (default 0)");
    s->add_option("--x-hi", o.x_hi, "Rectangle x to (default p-1)");
    s->add_option("--y-lo", o.y_lo, "Rectangle y from (default 1)");
    s->add_option("--y-hi", o.y_hi, "Rectangle y to (default (p-1)/2)");
  };

  auto* phi = app.add_subcommand("phi", "Residue distribution of window counts (one curve)");
  common(phi), curve(phi, false), scan(phi), theorem(phi);
  auto* joint = app.add_subcommand("joint", "Joint residue distribution over several curves");
  common(joint), curve(joint, true), scan(joint), theorem(joint);
  auto* restricted = app.add_subcommand("restricted", "Window counts restricted to a rectangle");
  common(restricted), curve(restricted, false), scan(restricted), theorem(restricted), rect(restricted);
  auto* beta = app.add_subcommand("beta", "beta-quadratic residues and nonresidues in windows [x0, x0+I)");
  common(beta), scan(beta);
  beta->add_option("--p", o.p, "Odd prime");
  beta->add_option("--beta", o.beta, "beta = num/den in (0, 1/2] (default 1/2)");
  auto* walk = app.add_subcommand("walk", "Simulate the random walk Phi(L; m, a)");
  common(walk);
  walk->add_option("--ell", o.ell, "Step value and inverse probability");
  walk->add_option("--m", o.m, "Modulus");
  walk->add_option("--L", o.L, "Walk length");
  walk->add_option("--trials", o.trials, "Trials (default 500)");
  walk->add_option("--seed", o.seed, "Seed (required)");
  walk->add_option("--blocks", o.blocks, "Also report model quantiles with this many blocks");
  auto* prop = app.add_subcommand("prop21", "Exact exponential-sum enumerations");
  common(prop);
  prop->add_option("--part", o.part, "a, b or c")->check(CLI::IsMember({"a", "b", "c"}));
  prop->add_option("--ell", o.ell, "l (parts a and b)");
  prop->add_option("--m", o.m, "Modulus");
  prop->add_option("--L", o.L, "Walk length");
  prop->add_option("--k", o.k, "Dimension (part b, default 2)");
  auto* charsum = app.add_subcommand("charsum", "Character sum Weil checks");
  common(charsum), curve(charsum, false);
  charsum->add_option("--lo", o.lo, "Interval start (default 0)");
  charsum->add_option("--hi", o.hi, "Interval end (default p-1)");
  charsum->add_option("--twist", o.twist, "Also check the complete sum twisted by e_p(-t x)");
  auto* census = app.add_subcommand("census", "Stride census of character patterns");
  common(census), curve(census, true);
  census->add_option("--stride", o.stride, "Stride L (default 1)");
  census->add_option("--offsets", o.offsets, "Offsets x_1..x_r, comma-separated");
  census->add_option("--N", o.N, "Index range [0, N] (default: largest keeping i L + x_j < p)");
  census->add_option("--v", o.targets, "Target unity indices, ';' between polynomials (default: all)");
  census->add_flag("--theorem", o.theorem, "Enforce the census theorem hypotheses");
  auto* shifted = app.add_subcommand("shifted", "Census of the x-shifted curve on a rectangle");
  common(shifted), curve(shifted, false), rect(shifted);
  shifted->add_option("--shifts", o.shifts, "Shift set H, comma-separated");
  shifted->add_option("--stride", o.stride, "Stride L (default 1)");
  auto* gauss = app.add_subcommand("gauss", "Gauss lemma sweep over a = 1..p-1");
  common(gauss);
  gauss->add_option("--p", o.p, "Odd prime");
  auto* gaps = app.add_subcommand("gaps", "Windows missing a given power-residue class");
  common(gaps);
  gaps->add_option("--p", o.p, "Prime");
  gaps->add_option("--ell", o.ell, "l");
  gaps->add_option("--window", o.windows, "Window lengths, comma-separated (default 10,20,40,80)");
  gaps->add_option("--mu", o.mu, "Unity index of the class to look for (default 1)");
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  common(verify);
  verify->add_option("--only", o.only, "Criterion ids, comma-separated (default: all)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << CURVESTAT_VERSION << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
  CLI::App* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();

  Report rep;
  rep.command = cmd;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    if (!o.config.empty()) detail::merge_config(sub, o.config);
    if (o.format != "csv" && o.format != "json") throw UsageError("--format: expected csv or json");
    if (o.threads < 1) throw UsageError("--threads: must be >= 1");
    const unsigned th = o.threads;

    if (cmd == "phi" || cmd == "joint" || cmd == "restricted") {
      detail::require(sub, {"p", "ell", "poly", "m", "I", "L", "seed"});
      if (cmd != "joint" && o.polys.size() != 1) throw UsageError("--poly: exactly one polynomial expected");
      const auto cs = detail::poly_coeffs(o);
      ExperimentInputs in;
      in.kind = cmd == "phi" ? TheoremKind::thm1 : cmd == "joint" ? TheoremKind::thm2 : TheoremKind::thm3;
      in.p = o.p;
      in.ell = o.ell;
      FieldSpec field(o.p);
      in.polys = detail::make_polys(cs, o.p);
      in.scan = detail::scan_from(sub, o, o.L);
      in.m = o.m;
      in.model_trials = o.trials;
      in.seed = o.seed;
      in.waive_asymptotic = o.waive;
      rep.config = Json{{"kind", to_string(in.kind)}, {"p", o.p}, {"ell", o.ell}, {"poly", detail::poly_echo(cs)},
                        {"m", o.m}};
      rep.config.update(detail::scan_echo(in.scan));
      if (in.kind == TheoremKind::thm3) {
        Rect r{{o.x_lo, detail::given(sub, "x-hi") ? o.x_hi : o.p - 1},
               {detail::given(sub, "y-lo") ? o.y_lo : 1, detail::given(sub, "y-hi") ? o.y_hi : (o.p - 1) / 2}};
        in.rect = r;
        rep.config["rect"] = detail::rect_echo(r);
      }
      rep.config["trials"] = o.trials;
      rep.config["seed"] = o.seed;
      rep.config["waive_asymptotic"] = o.waive;
      fill_experiment(rep, theorem_experiment(in, th));
    } else if (cmd == "beta") {
      detail::require(sub, {"p", "I", "m"});
      const Beta b = parse_beta(o.beta);
      const FieldSpec field(o.p);
      const ScanSpec s = detail::scan_from(sub, o, 0);
      rep.config = Json{{"p", o.p}, {"beta", o.beta}, {"m", o.m}, {"I", o.I}, {"x_start", s.x_start},
                        {"scan_len", s.scan_len}};
      const BetaScan r = beta_residue_scan(field, b, s, o.m, th);
      rep.check("0 < β ≤ 1/2", true);
      rep.check("condition (∗)", true);
      bool partition = true;
      for (std::size_t i = 0; i < r.residues.size(); ++i) {
        partition = partition && r.residues[i] + r.nonresidues[i] == static_cast<i64>(o.I);
      }
      rep.check("R_β + N_β = I", partition);
      rep.result["y_max"] = r.y_max;
      const Rational dr = discrepancy(r.residue_hist);
      const Rational dn = discrepancy(r.nonresidue_hist);
      rep.result["residue_discrepancy"] = dr.str();
      rep.result["nonresidue_discrepancy"] = dn.str();
      rep.histograms.emplace_back("residues", r.residue_hist);
      rep.histograms.emplace_back("nonresidues", r.nonresidue_hist);
    } else if (cmd == "walk") {
      detail::require(sub, {"ell", "m", "L", "seed"});
      WalkConfig w{o.ell, o.m, o.L, o.trials, o.seed};
      rep.config = Json{{"ell", o.ell}, {"m", o.m}, {"L", o.L}, {"trials", o.trials}, {"seed", o.seed}};
      const PhiSimulation sim = simulate_phi(w, th);
      const double p_hat = static_cast<double>(sim.x_at_value) / static_cast<double>(sim.x_draws);
      const double q = 1.0 / static_cast<double>(o.ell);
      const double tol = 4.0 * std::sqrt(1.0 / (static_cast<double>(o.ell * o.trials * o.L)));
      rep.result["x_draws"] = sim.x_draws;
      rep.result["x_at_value"] = sim.x_at_value;
      rep.result["p_hat"] = p_hat;
      rep.result["step_law_ok"] = std::fabs(p_hat - q) <= tol;
      Table t{{"a", "mean_phi", "variance_phi"}, {}};
      for (u64 a = 0; a < o.m; ++a) t.rows.push_back({Json(a), Json(sim.mean[a]), Json(sim.variance[a])});
      rep.table = t;
      if (detail::given(sub, "blocks")) {
        rep.config["blocks"] = o.blocks;
        ModelConfig mc{StepLaw::power_residue(o.ell), o.m, o.L, o.blocks, 1, o.trials, o.seed};
        rep.result["model"] = model_json(model_reference(mc, th));
      }
    } else if (cmd == "prop21") {
      detail::require(sub, {"part", "m", "L"});
      rep.config = Json{{"part", o.part}, {"m", o.m}, {"L", o.L}};
      if (o.part != "c") {
        rep.config["ell"] = o.ell;
        const bool cop = std::gcd(o.ell, o.m) == 1;
        rep.check("GCD(ℓ,m)=1", cop);
        if (!cop) throw HypothesisError({"GCD(ℓ,m)=1"});
      }
      if (o.part == "b") rep.config["k"] = o.k;
      const EnumResult r = o.part == "a"   ? exact_prop21a(o.ell, o.m, o.L)
                           : o.part == "b" ? exact_prop21b(o.ell, o.m, o.L, o.k)
                                           : exact_prop21c(o.m, o.L);
      rep.result = Json{{"lhs", r.lhs}, {"bound", r.bound}, {"pass", r.pass}};
    } else if (cmd == "charsum") {
      detail::require(sub, {"p", "ell", "poly"});
      const auto cs = detail::poly_coeffs(o);
      const FieldSpec field(o.p);
      const Character chi(field, o.ell);
      const Poly P = Poly::from_signed(cs.front(), o.p);
      const Interval iv{o.lo, detail::given(sub, "hi") ? o.hi : o.p - 1};
      if (iv.lo > iv.hi || iv.hi >= o.p) throw std::invalid_argument("charsum: need lo <= hi <= p-1");
      rep.config = Json{{"p", o.p}, {"ell", o.ell}, {"poly", detail::poly_echo(cs)}, {"lo", iv.lo}, {"hi", iv.hi}};
      const bool np = P.is_zero() || chi.order() < 2 || !is_complete_power(P, chi.order());
      rep.check("P not a complete ℓ-th power", np);
      const WeilCheck w = weil_check(P, chi, iv, th);
      rep.result = Json{{"order", chi.order()}, {"magnitude", w.magnitude}, {"bound", w.bound}, {"pass", w.pass}};
      if (detail::given(sub, "twist")) {
        rep.config["twist"] = o.twist;
        const WeilCheck tw = twisted_weil_check(P, chi, o.twist, th);
        rep.result["twisted"] = Json{{"magnitude", tw.magnitude}, {"bound", tw.bound}, {"pass", tw.pass}};
      }
    } else if (cmd == "census") {
      detail::require(sub, {"p", "ell", "poly", "offsets"});
      const auto cs = detail::poly_coeffs(o);
      const FieldSpec field(o.p);
      const Character chi(field, o.ell);
      CensusSpec spec;
      spec.polys = detail::make_polys(cs, o.p);
      spec.stride = o.stride;
      spec.offsets = parse_u64_list(o.offsets, "offsets");
      spec.theorem_mode = o.theorem;
      if (o.stride < 1) throw std::invalid_argument("census: stride must be >= 1");
      const u64 xmax = *std::max_element(spec.offsets.begin(), spec.offsets.end());
      if (detail::given(sub, "N")) {
        spec.N = o.N;
      } else {
        if (xmax >= o.p) throw std::invalid_argument("census: offsets must be < p");
        spec.N = (o.p - 1 - xmax) / o.stride;
      }
      const std::size_t k = spec.polys.size();
      const std::size_t r = spec.offsets.size();
      rep.config = Json{{"p", o.p}, {"ell", o.ell}, {"poly", detail::poly_echo(cs)}, {"stride", o.stride},
                        {"offsets", spec.offsets}, {"N", spec.N}, {"theorem", o.theorem}};
      std::vector<std::vector<std::vector<std::uint32_t>>> all;
      if (detail::given(sub, "v")) {
        rep.config["v"] = o.targets;
        std::vector<std::vector<std::uint32_t>> t;
        for (const auto& part : split(o.targets, ';')) {
          std::vector<std::uint32_t> row;
          for (u64 v : parse_u64_list(part, "v")) row.push_back(static_cast<std::uint32_t>(v));
          t.push_back(row);
        }
        all.push_back(t);
      } else {
        const u64 d = chi.order();
        u128 total = 1;
        for (std::size_t i = 0; i < k * r; ++i) total *= d;
        if (total > 4096) throw std::invalid_argument("census: more than 4096 target vectors; pass --v");
        for (u64 code = 0; code < static_cast<u64>(total); ++code) {
          std::vector<std::vector<std::uint32_t>> t(k, std::vector<std::uint32_t>(r));
          u64 c = code;
          for (std::size_t l = 0; l < k; ++l) {
            for (std::size_t j = 0; j < r; ++j) {
              t[l][j] = static_cast<std::uint32_t>(c % d);
              c /= d;
            }
          }
          all.push_back(t);
        }
      }
      if (k >= 2) {
        const auto ind = multiplicatively_independent(spec.polys);
        rep.check("multiplicative independence", ind.independent);
      }
      Table t{{"v", "count", "prediction", "residual", "main_bound", "slack", "main_bound_ok", "bound_ok"}, {}};
      bool all_ok = true;
      for (const auto& target : all) {
        spec.targets = target;
        const CensusResult cr = k == 1 ? census_M(spec, chi, th) : joint_census(spec, chi, th);
        std::string label;
        for (std::size_t l = 0; l < k; ++l) label += (l ? ";" : "") + detail::join(target[l]);
        t.rows.push_back({Json(label), Json(cr.count), Json(cr.prediction.str()), Json(cr.residual),
                          Json(cr.main_bound), Json(cr.slack), Json(cr.main_bound_ok), Json(cr.bound_ok)});
        all_ok = all_ok && cr.bound_ok;
      }
      if (o.theorem) {
        rep.check("r < log p / log(4d)", true);
        rep.check("P admissible and not a complete ℓ-th power", true);
      }
      rep.result["vectors"] = all.size();
      rep.result["all_bound_ok"] = all_ok;
      rep.table = t;
    } else if (cmd == "shifted") {
      detail::require(sub, {"p", "ell", "poly", "shifts"});
      const auto cs = detail::poly_coeffs(o);
      const FieldSpec field(o.p);
      const Curve C(field, o.ell, Poly::from_signed(cs.front(), o.p));
      const Rect r{{o.x_lo, detail::given(sub, "x-hi") ? o.x_hi : o.p - 1},
                   {detail::given(sub, "y-lo") ? o.y_lo : 1, detail::given(sub, "y-hi") ? o.y_hi : (o.p - 1) / 2}};
      const auto H = parse_u64_list(o.shifts, "shifts");
      rep.config = Json{{"p", o.p}, {"ell", o.ell}, {"poly", detail::poly_echo(cs)}, {"rect", detail::rect_echo(r)},
                        {"shifts", H}, {"stride", o.stride}};
      const DeltaIndex index(C, r);
      const auto star = condition_star(index);
      rep.check("condition (∗)", star.ok, star.ok ? "" : "witness x=" + std::to_string(*star.witness));
      if (!star.ok) throw ConditionStarError(*star.witness);
      const ShiftedCensus sc = shifted_census(index, H, o.stride);
      rep.result = Json{{"count", sc.count}, {"prediction", sc.prediction}, {"boundary_misses", sc.boundary_misses}};
    } else if (cmd == "gauss") {
      detail::require(sub, {"p"});
      rep.config = Json{{"p", o.p}};
      if (o.p < 3 || !is_prime(o.p)) throw std::invalid_argument("gauss: p must be an odd prime");
      Table t{{"a", "r", "legendre", "ok"}, {}};
      bool all_ok = true;
      for (u64 a = 1; a < o.p; ++a) {
        const GaussCheck g = gauss_lemma_check(a, o.p);
        t.rows.push_back({Json(a), Json(g.r), Json(legendre(a, o.p)), Json(g.ok)});
        all_ok = all_ok && g.ok;
      }
      rep.result["all_ok"] = all_ok;
      rep.table = t;
    } else if (cmd == "gaps") {
      detail::require(sub, {"p", "ell"});
      const FieldSpec field(o.p);
      const auto ws = parse_u64_list(o.windows, "window");
      rep.config = Json{{"p", o.p}, {"ell", o.ell}, {"window", ws}, {"mu", o.mu}};
      const bool cong = (o.p - 1) % o.ell == 0;
      rep.check("p ≡ 1 (mod ℓ)", cong);
      if (!cong) throw HypothesisError({"p ≡ 1 (mod ℓ)"});
      if (o.mu >= o.ell) throw std::invalid_argument("gaps: mu must be < ell");
      const Character chi(field, o.ell);
      Table t{{"window", "exceptional"}, {}};
      for (u64 w : ws) t.rows.push_back({Json(w), Json(cor4_exceptional(chi, w, static_cast<std::uint32_t>(o.mu)))});
      rep.table = t;
    } else if (cmd == "verify") {
      std::vector<int> ids;
      if (!o.only.empty()) {
        for (u64 v : parse_u64_list(o.only, "only")) ids.push_back(static_cast<int>(v));
      }
      const auto results = acceptance::run(ids, th);
      bool ok = true;
      const bool as_json = detail::given(sub, "format") && o.format == "json";
      if (as_json) {
        Json arr = Json::array();
        for (const auto& c : results) {
          arr.push_back(Json{{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail},
                             {"seconds", c.seconds}});
        }
        out << Json{{"criteria", arr}}.dump(2) << '\n';
      }
      for (const auto& c : results) {
        ok = ok && c.passed;
        if (!as_json) out << acceptance::line(c) << '\n';
      }
      return ok ? 0 : 1;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const HypothesisError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  rep.meta.threads = o.threads;
  rep.meta.duration_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    emit(rep, o.format == "csv" ? Format::csv : Format::json, o.out, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  if (o.format == "csv") {
    for (const auto& c : rep.checks) err << "check " << c.name << ": " << to_string(c.status) << '\n';
  }
  return 0;
}

}  // namespace curvestat::cli
