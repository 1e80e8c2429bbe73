// rhsolve: experiment harness for the share-decomposition solvers.
//
//   rhsolve shor   --method sgmts --theta 0.1 --eps 0.1,0.01
//   rhsolve declp  --l 2 --method sgmts --theta 5 --budget 2000
//   rhsolve verify --l 1,2,5
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rhsdecomp/rhsdecomp.hpp"

namespace {

using nlohmann::json;
using namespace rhsd;

enum class Method { SGM, SGMTS, SGMSQ, DASG };

Method parse_method(const std::string& s) {
  if (s == "sgm") return Method::SGM;
  if (s == "sgmts") return Method::SGMTS;
  if (s == "sgmsq") return Method::SGMSQ;
  if (s == "dasg") return Method::DASG;
  throw CLI::ValidationError("--method", "unknown method: " + s);
}

StepSchedule schedule_for(Method m, double theta, double nu, long d, int offset) {
  StepSchedule sch;
  sch.theta = theta;
  sch.offset = offset;
  sch.nu = nu;
  sch.anchor_gap = d;
  switch (m) {
    case Method::SGM: sch.kind = ScheduleKind::Plain; break;
    case Method::SGMTS: sch.kind = ScheduleKind::TwoSpeed; break;
    case Method::SGMSQ:
    case Method::DASG: sch.kind = ScheduleKind::SquareRoot; break;
  }
  return sch;
}

std::vector<double> parse_eps_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) throw CLI::ValidationError("--eps", "empty accuracy list");
  return out;
}

std::string config_hash(const json& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016zx", std::hash<std::string>{}(cfg.dump()));
  return buf;
}

void write_text_file(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open output file: " + path);
  fn(out);
}

void emit_outputs(const RunTrace& trace, const json& report, const std::string& csv_path,
                  const std::string& json_path) {
  if (!csv_path.empty())
    write_text_file(csv_path, [&](std::ostream& os) { trace.write_csv(os); });
  if (!json_path.empty())
    write_text_file(json_path, [&](std::ostream& os) { os << report.dump(2) << "\n"; });
}

// first iteration index at which best-so-far deviation dips to eps
struct EpsHit {
  double eps;
  long iteration = -1;
};

std::vector<EpsHit> accuracy_hits(const RunTrace& trace, double opt_value,
                                  const std::vector<double>& eps_list) {
  std::vector<EpsHit> hits;
  for (double eps : eps_list) {
    EpsHit h{eps, -1};
    for (const auto& r : trace.records) {
      if (r.best - opt_value <= eps) {
        h.iteration = r.k;
        break;
      }
    }
    hits.push_back(h);
  }
  return hits;
}

int cmd_shor(Method method, double theta, double nu, long d, int offset,
             const std::vector<double>& eps_list, long max_iter, bool normalize,
             bool no_timing, const std::string& csv_path, const std::string& json_path) {
  SolverConfig cfg;
  cfg.schedule = schedule_for(method, theta, nu, d, offset);
  cfg.normalize_subgradient = normalize;
  cfg.max_iter = max_iter;
  cfg.target_value = ShorProblem::optimal_value;
  cfg.target_eps = *std::min_element(eps_list.begin(), eps_list.end());
  cfg.record_time = !no_timing;

  Oracle oracle = [](const Vec& v) {
    ShorEvaluation e = shor_eval(v);
    return std::make_pair(e.value, std::move(e.subgradient));
  };

  RunTrace trace = method == Method::DASG
                       ? run_dasg(oracle, ShorProblem::start_point(), cfg)
                       : run_subgradient(oracle, identity_projection,
                                         ShorProblem::start_point(), cfg);

  auto hits = accuracy_hits(trace, ShorProblem::optimal_value, eps_list);

  json cfg_json = {{"problem", "shor"},     {"method", static_cast<int>(method)},
                   {"theta", theta},        {"nu", nu},
                   {"d", d},                {"offset", offset},
                   {"normalize", normalize}, {"max_iter", max_iter}};
  json report;
  report["problem"] = "shor";
  report["config_hash"] = config_hash(cfg_json);
  report["optimal_value"] = ShorProblem::optimal_value;
  report["best_value"] = trace.best_value;
  report["iterations"] = trace.iterations;
  if (!no_timing) report["elapsed_s"] = trace.records.back().elapsed_s;
  report["hits"] = json::array();
  for (const auto& h : hits)
    report["hits"].push_back({{"eps", h.eps}, {"it", h.iteration}});

  std::printf("problem: shor (phi* = %.5f)\n", ShorProblem::optimal_value);
  std::printf("%12s %12s\n", "eps", "it");
  for (const auto& h : hits) {
    if (h.iteration >= 0)
      std::printf("%12g %12ld\n", h.eps, h.iteration);
    else
      std::printf("%12g %12s\n", h.eps, "-");
  }
  std::printf("best value: %.7f after %ld iterations\n", trace.best_value,
              trace.iterations);

  emit_outputs(trace, report, csv_path, json_path);
  return 0;
}

int cmd_declp(std::size_t l, double phase, Method method, double theta, double nu, long d,
              int offset, long budget, const std::vector<double>& t_explicit, double margin,
              bool normalize, bool no_timing, const std::string& csv_path,
              const std::string& json_path, const std::string& dump_problem) {
  if (method != Method::SGM && method != Method::SGMTS) {
    std::cerr << "declp supports only sgm and sgmts\n";
    return 1;
  }
  GeneratorSpec spec{l, phase};
  DecomposableLP p = generate_declp(spec);
  ReferenceSolution ref = solve_full_reference(p);

  PenaltyBound t = t_explicit.empty()
                       ? calibrate_penalty(p, margin).t
                       : PenaltyBound(t_explicit);
  if (!t_explicit.empty() && t.t.size() != p.num_resources())
    throw InvalidProblem("explicit t has wrong length");

  if (!dump_problem.empty()) save_problem_file(dump_problem, p, t.t);

  SolverConfig cfg;
  cfg.schedule = schedule_for(method, theta, nu, d, offset);
  cfg.normalize_subgradient = normalize;
  cfg.max_iter = budget;
  cfg.record_time = !no_timing;

  Oracle oracle = make_master_oracle(p, t);
  Projector project = make_share_projector(p);
  RunTrace trace = run_subgradient(oracle, project, initial_allocation(p).u, cfg);

  // best mu at the reporting grid 0, 50, 100, ...
  std::printf("problem: declp l=%zu phase=%g (f* = %.6f)\n", l, phase, ref.objective);
  std::printf("t =");
  for (double v : t.t) std::printf(" %.4f", v);
  std::printf("  lambda* =");
  for (double v : ref.lambda) std::printf(" %.4f", v);
  std::printf("\n%12s %14s\n", "it", "best mu");
  json checkpoints = json::array();
  for (const auto& r : trace.records) {
    if (r.k % 50 == 0 || r.k == trace.iterations) {
      std::printf("%12ld %14.6f\n", r.k, r.best);
      checkpoints.push_back({{"it", r.k}, {"best", r.best}});
    }
  }

  ShareAllocation u_final{p.num_blocks(), p.num_resources(), trace.best_point};
  MasterEvaluation final_eval = eval_master(p, u_final, t);
  BlockPoint recovered = recover_primal(final_eval);
  Vec viol = joint_violation(p, recovered);
  double viol_max = 0.0;
  for (double v : viol) viol_max = std::max(viol_max, v);
  const double gap = std::abs(trace.best_value - ref.objective);

  std::printf("final best mu = %.6f, gap = %.3e, recovered violation = %.3e\n",
              trace.best_value, gap, viol_max);

  json cfg_json = {{"problem", "declp"},   {"l", l},       {"phase", phase},
                   {"method", static_cast<int>(method)},   {"theta", theta},
                   {"nu", nu},             {"d", d},       {"offset", offset},
                   {"budget", budget},     {"t", t.t},     {"normalize", normalize}};
  json report;
  report["problem"] = "declp";
  report["config_hash"] = config_hash(cfg_json);
  report["l"] = l;
  report["f_star"] = ref.objective;
  report["lambda_star"] = ref.lambda;
  report["t"] = t.t;
  report["best_mu"] = trace.best_value;
  report["gap"] = gap;
  report["recovered_violation"] = viol_max;
  report["checkpoints"] = checkpoints;
  if (!no_timing) report["elapsed_s"] = trace.records.back().elapsed_s;

  emit_outputs(trace, report, csv_path, json_path);
  return 0;
}

int cmd_verify(const std::vector<std::size_t>& l_list, double phase,
               const std::vector<double>& t_explicit, std::uint64_t seed) {
  bool all_ok = true;
  for (std::size_t l : l_list) {
    GeneratorSpec spec{l, phase};
    DecomposableLP p = generate_declp(spec);
    ReferenceSolution ref = solve_full_reference(p);
    CalibrationResult cal = calibrate_penalty(p);
    PenaltyBound t = t_explicit.empty() ? cal.t : PenaltyBound(t_explicit);

    std::printf("l=%zu: f* = %.6f, lambda* = (", l, ref.objective);
    for (std::size_t j = 0; j < ref.lambda.size(); ++j)
      std::printf("%s%.4f", j ? ", " : "", ref.lambda[j]);
    std::printf("), t = (");
    for (std::size_t j = 0; j < t.t.size(); ++j)
      std::printf("%s%.4f", j ? ", " : "", t.t[j]);
    std::printf(")\n");

    bool ok = true;
    ShareAllocation u_star = optimal_shares(p, ref.x);
    MasterOptions mopt;
    mopt.cross_check = true;
    bool dominated = true;
    for (std::size_t j = 0; j < t.t.size(); ++j)
      if (!(t.t[j] > ref.lambda[j])) dominated = false;
    if (!dominated) {
      try {
        MasterEvaluation at_star = eval_master(p, u_star, t, mopt);
        if (at_star.value < ref.objective - 1e-9) {
          std::printf("  note: t does not dominate lambda*, mu(u*,t) = %.6f < f* "
                      "(expected precondition violation)\n",
                      at_star.value);
        } else {
          std::printf("  FAIL: t does not dominate lambda* yet mu(u*,t) >= f*\n");
          ok = false;
        }
      } catch (const InvalidPenaltyBound&) {
        std::printf("  note: t does not dominate lambda*, penalized master unbounded "
                    "below (expected precondition violation)\n");
      }
      std::printf("  %s\n", ok ? "PASS" : "FAIL");
      all_ok = all_ok && ok;
      continue;
    }
    MasterEvaluation at_star = eval_master(p, u_star, t, mopt);
    const double exact_err = std::abs(at_star.value - ref.objective);
    if (exact_err > 1e-7) {
      std::printf("  FAIL exactness: |mu(u*,t) - f*| = %.3e\n", exact_err);
      ok = false;
    } else {
      std::printf("  ok  exactness: |mu(u*,t) - f*| = %.3e\n", exact_err);
    }

    // subgradient inequality on random share pairs
    std::mt19937_64 rng(seed + l);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t dim = l * p.num_resources();
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      Vec a(dim), bvec(dim);
      for (auto& v : a) v = gauss(rng);
      for (auto& v : bvec) v = gauss(rng);
      ShareAllocation ua = project_onto_U(a, l, p.b);
      ShareAllocation ub = project_onto_U(bvec, l, p.b);
      MasterEvaluation ea = eval_master(p, ua, t, mopt);
      MasterEvaluation eb = eval_master(p, ub, t);
      const double lhs = eb.value - ea.value;
      const double rhs = dot(ea.subgradient, ub.u - ua.u);
      worst = std::min(worst, lhs - rhs);
    }
    if (worst < -1e-9) {
      std::printf("  FAIL subgradient inequality: worst slack %.3e\n", worst);
      ok = false;
    } else {
      std::printf("  ok  subgradient inequality (50 pairs, worst slack %.3e)\n", worst);
    }

    std::printf("  %s\n", ok ? "PASS" : "FAIL");
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 2;
}

std::vector<std::size_t> parse_l_list(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    long v = std::stol(item);
    if (v < 1) throw CLI::ValidationError("--l", "block counts must be >= 1");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw CLI::ValidationError("--l", "empty block-count list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"right-hand-side decomposition solver harness"};
  app.require_subcommand(1);

  // shor
  auto* shor = app.add_subcommand("shor", "run the max-of-quadratics benchmark");
  std::string method_str = "sgm";
  double theta = 0.1, nu = 0.7;
  long d = 25;
  int offset = 1;
  std::string eps_str = "0.1,0.01,0.001,0.0001";
  long max_iter = 50000;
  bool normalize = false, no_timing = false;
  std::string csv_path, json_path;
  shor->add_option("--method", method_str, "sgm | sgmts | sgmsq | dasg");
  shor->add_option("--theta", theta, "starting step");
  shor->add_option("--nu", nu, "two-speed decay ratio");
  shor->add_option("--d", d, "two-speed anchor gap");
  shor->add_option("--offset", offset, "slow-rule offset (1 or 2)");
  shor->add_option("--eps", eps_str, "comma-separated accuracy targets");
  shor->add_option("--max-iter", max_iter, "iteration budget");
  shor->add_flag("--normalize", normalize, "use normed subgradients");
  shor->add_flag("--no-timing", no_timing, "omit wall-clock fields (reproducible output)");
  shor->add_option("--csv", csv_path, "write full trace CSV here");
  shor->add_option("--json", json_path, "write the report JSON here");

  // declp
  auto* declp = app.add_subcommand("declp", "run a generated decomposable LP");
  std::size_t l = 2;
  double phase = 0.0, margin = 1.0;
  std::string d_method = "sgmts";
  double d_theta = 5.0, d_nu = 0.8;
  long d_gap = 25, budget = 2000;
  int d_offset = 2;
  std::vector<double> t_explicit;
  bool d_normalize = false, d_no_timing = false;
  std::string d_csv, d_json, dump_problem;
  declp->add_option("--l", l, "number of blocks");
  declp->add_option("--phase", phase, "generator phase offset");
  declp->add_option("--method", d_method, "sgm | sgmts");
  declp->add_option("--theta", d_theta, "starting step");
  declp->add_option("--nu", d_nu, "two-speed decay ratio");
  declp->add_option("--d", d_gap, "two-speed anchor gap");
  declp->add_option("--offset", d_offset, "slow-rule offset (1 or 2)");
  declp->add_option("--budget", budget, "iteration budget");
  declp->add_option("--t", t_explicit, "explicit penalty weights (default: calibrate)");
  declp->add_option("--margin", margin, "calibration margin");
  declp->add_flag("--normalize", d_normalize, "use normed subgradients");
  declp->add_flag("--no-timing", d_no_timing, "omit wall-clock fields");
  declp->add_option("--csv", d_csv, "write full trace CSV here");
  declp->add_option("--json", d_json, "write the report JSON here");
  declp->add_option("--dump-problem", dump_problem, "serialize the instance to this path");

  // verify
  auto* verify = app.add_subcommand("verify", "exactness self-checks on generated instances");
  std::string l_list_str = "1,2,5";
  double v_phase = 0.0;
  std::vector<double> v_t;
  std::uint64_t seed = 20240117;
  verify->add_option("--l", l_list_str, "comma-separated block counts");
  verify->add_option("--phase", v_phase, "generator phase offset");
  verify->add_option("--t", v_t, "explicit penalty weights (default: calibrate)");
  verify->add_option("--seed", seed, "sampling seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (shor->parsed())
      return cmd_shor(parse_method(method_str), theta, nu, d, offset,
                      parse_eps_list(eps_str), max_iter, normalize, no_timing, csv_path,
                      json_path);
    if (declp->parsed())
      return cmd_declp(l, phase, parse_method(d_method), d_theta, d_nu, d_gap, d_offset,
                       budget, t_explicit, margin, d_normalize, d_no_timing, d_csv, d_json,
                       dump_problem);
    if (verify->parsed())
      return cmd_verify(parse_l_list(l_list_str), v_phase, v_t, seed);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
