// Acceptance suite: one pass/fail line per criterion on stdout.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "rhsdecomp/rhsdecomp.hpp"
#include "test_util.hpp"

using namespace rhsd;

namespace {

struct MethodResult {
  std::vector<long> hits;  // iteration index per eps, -1 if not reached
};

Oracle shor_oracle() {
  return [](const Vec& v) {
    ShorEvaluation e = shor_eval(v);
    return std::make_pair(e.value, std::move(e.subgradient));
  };
}

MethodResult run_shor(const StepSchedule& sch, bool dasg, const std::vector<double>& eps,
                      long budget) {
  SolverConfig cfg;
  cfg.schedule = sch;
  cfg.max_iter = budget;
  cfg.target_value = ShorProblem::optimal_value;
  cfg.target_eps = *std::min_element(eps.begin(), eps.end());
  cfg.record_time = false;
  RunTrace trace = dasg ? run_dasg(shor_oracle(), ShorProblem::start_point(), cfg)
                        : run_subgradient(shor_oracle(), identity_projection,
                                          ShorProblem::start_point(), cfg);
  MethodResult out;
  for (double e : eps) {
    long hit = -1;
    for (const auto& r : trace.records)
      if (r.best - ShorProblem::optimal_value <= e) {
        hit = r.k;
        break;
      }
    out.hits.push_back(hit);
  }
  return out;
}

// paper-count tolerance: within +-15% or reached no later than 1.25x
bool count_ok(long hit, double paper) {
  if (hit < 0) return false;
  const double h = static_cast<double>(hit);
  return std::abs(h - paper) <= 0.15 * paper || h <= 1.25 * paper;
}

void report(int n, bool ok, const std::string& what) {
  std::printf("[criterion %d] %s  %s\n", n, ok ? "PASS" : "FAIL", what.c_str());
}

ShareAllocation random_shares(std::mt19937_64& rng, const DecomposableLP& p) {
  std::normal_distribution<double> gauss(0.0, 1.5);
  Vec v(p.num_blocks() * p.num_resources());
  for (auto& x : v) x = gauss(rng);
  return project_onto_U(v, p.num_blocks(), p.b);
}

long g_sgm_hit_1e4 = -1;
long g_sgmts_hit_1e4 = -1;

}  // namespace

TEST_CASE("criterion 1: table-1 reproduction on the shor problem") {
  const auto t0 = std::chrono::steady_clock::now();

  MethodResult sgm =
      run_shor({ScheduleKind::Plain, 0.1, 1}, false, {0.1, 0.01, 0.001, 0.0001}, 9000);
  MethodResult sgmts = run_shor({ScheduleKind::TwoSpeed, 0.1, 1, 0.7, 25}, false,
                                {0.1, 0.01, 0.001, 0.0001}, 4700);
  MethodResult sgmsq =
      run_shor({ScheduleKind::SquareRoot, 0.1}, false, {0.1, 0.01, 0.003}, 43750);
  MethodResult dasg =
      run_shor({ScheduleKind::SquareRoot, 0.1}, true, {0.1, 0.01, 0.001, 0.0003}, 43750);

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  g_sgm_hit_1e4 = sgm.hits[3];
  g_sgmts_hit_1e4 = sgmts.hits[3];

  struct Check {
    const char* method;
    long hit;
    double paper;
  };
  const std::vector<Check> checks = {
      {"SGM eps=0.1", sgm.hits[0], 60},       {"SGM eps=0.01", sgm.hits[1], 252},
      {"SGM eps=0.001", sgm.hits[2], 1410},   {"SGM eps=0.0001", sgm.hits[3], 6728},
      {"SGMTS eps=0.1", sgmts.hits[0], 21},   {"SGMTS eps=0.01", sgmts.hits[1], 292},
      {"SGMTS eps=0.001", sgmts.hits[2], 570},{"SGMTS eps=0.0001", sgmts.hits[3], 3696},
      {"SGMSQ eps=0.1", sgmsq.hits[0], 404},  {"SGMSQ eps=0.01", sgmsq.hits[1], 14575},
      {"SGMSQ eps=0.003", sgmsq.hits[2], 35000},
      {"DASG eps=0.1", dasg.hits[0], 117},    {"DASG eps=0.01", dasg.hits[1], 1542},
      {"DASG eps=0.001", dasg.hits[2], 9982}, {"DASG eps=0.0003", dasg.hits[3], 35000},
  };

  bool ok = elapsed < 5.0;
  std::string detail;
  for (const auto& c : checks) {
    const bool this_ok = count_ok(c.hit, c.paper);
    if (!this_ok) {
      ok = false;
      detail += std::string(detail.empty() ? "" : "; ") + c.method + ": " +
                std::to_string(c.hit) + " vs " + std::to_string((long)c.paper);
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), " (%.2fs)", elapsed);
  report(1, ok, ok ? std::string("all iteration counts within tolerance") + buf
                   : detail + buf);
  for (const auto& c : checks) {
    INFO(c.method << ": hit " << c.hit << ", paper " << c.paper);
    CHECK(count_ok(c.hit, c.paper));
  }
  CHECK(elapsed < 5.0);
}

TEST_CASE("criterion 2: two-speed beats plain SGM at high accuracy") {
  if (g_sgm_hit_1e4 < 0 || g_sgmts_hit_1e4 < 0) {
    MethodResult sgm =
        run_shor({ScheduleKind::Plain, 0.1, 1}, false, {0.0001}, 9000);
    MethodResult sgmts =
        run_shor({ScheduleKind::TwoSpeed, 0.1, 1, 0.7, 25}, false, {0.0001}, 4700);
    g_sgm_hit_1e4 = sgm.hits[0];
    g_sgmts_hit_1e4 = sgmts.hits[0];
  }
  const bool ok =
      g_sgmts_hit_1e4 >= 0 && g_sgm_hit_1e4 >= 0 && g_sgmts_hit_1e4 < g_sgm_hit_1e4;
  report(2, ok,
         "SGMTS " + std::to_string(g_sgmts_hit_1e4) + " < SGM " +
             std::to_string(g_sgm_hit_1e4) + " iterations to 1e-4");
  CHECK(ok);
}

TEST_CASE("criterion 3: exact-penalty equivalence") {
  bool ok = true;
  std::string detail;
  for (std::size_t l : {1u, 2u, 5u}) {
    DecomposableLP p = generate_declp({l, 0.0});
    ReferenceSolution ref = solve_full_reference(p);
    CalibrationResult cal = calibrate_penalty(p);
    ShareAllocation u_star = optimal_shares(p, ref.x);
    MasterEvaluation me = eval_master(p, u_star, cal.t);
    BlockPoint x = recover_primal(me);
    Vec viol = joint_violation(p, x);
    double viol_max = 0.0;
    for (double v : viol) viol_max = std::max(viol_max, v);
    const double val_err = std::abs(me.value - ref.objective);
    const double obj_err = std::abs(full_objective(p, x) - ref.objective);
    if (val_err > 1e-7 || viol_max > 1e-6 || obj_err > 1e-6) ok = false;
    detail += "l=" + std::to_string(l) + " err=" + std::to_string(val_err) + " ";
    CHECK(val_err <= 1e-7);
    CHECK(viol_max <= 1e-6);
    CHECK(obj_err <= 1e-6);
  }
  report(3, ok, "mu(u*, t) = f* and primal recovery for l in {1, 2, 5}");
}

TEST_CASE("criterion 4: exactness fails when t does not dominate lambda*") {
  DecomposableLP p = generate_declp({2, 0.0});
  ReferenceSolution ref = solve_full_reference(p);
  CalibrationResult cal = calibrate_penalty(p);
  // push one component strictly below lambda*. keeping the other at lambda*
  // itself rules out every alternate dual optimum, so the penalized block
  // problem loses its finite minimum and mu(u*, t) = -inf
  Vec weak = cal.t.t;
  weak[0] = 0.5 * ref.lambda[0];
  weak[1] = ref.lambda[1];
  double mu = -std::numeric_limits<double>::infinity();
  try {
    mu = eval_master(p, optimal_shares(p, ref.x), PenaltyBound(weak)).value;
  } catch (const InvalidPenaltyBound&) {
  }
  const bool ok = mu < ref.objective - 1e-9;
  report(4, ok,
         "mu(u*, weak t) = " + std::to_string(mu) + " < f* = " +
             std::to_string(ref.objective));
  CHECK(ok);
}

TEST_CASE("criterion 5: oracle consistency") {
  DecomposableLP p = generate_declp({2, 0.0});
  PenaltyBound t = calibrate_penalty(p).t;
  std::mt19937_64 rng(271828);
  std::uniform_real_distribution<double> share(-1.0, 3.0);

  bool ok = true;
  double worst_pd = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t i = trial % p.num_blocks();
    Vec u{share(rng), share(rng)};
    BlockEvaluation be = eval_mu_block(p.blocks[i], u, t, static_cast<int>(i));
    const double primal = eval_mu_block_primal(p.blocks[i], u, t);
    worst_pd = std::max(worst_pd, std::abs(be.mu - primal));
  }
  if (worst_pd > 1e-8) ok = false;
  CHECK(worst_pd <= 1e-8);

  double worst_slack = 0.0;
  double worst_norm = 0.0;
  const double bound = subgradient_norm_bound(p.num_blocks(), t);
  for (int trial = 0; trial < 200; ++trial) {
    ShareAllocation ua = random_shares(rng, p);
    ShareAllocation ub = random_shares(rng, p);
    MasterEvaluation ea = eval_master(p, ua, t);
    MasterEvaluation eb = eval_master(p, ub, t);
    worst_slack =
        std::min(worst_slack, eb.value - ea.value - dot(ea.subgradient, ub.u - ua.u));
    worst_norm = std::max(worst_norm, norm2(ea.subgradient));
  }
  if (worst_slack < -1e-9 || worst_norm > bound + 1e-12) ok = false;
  CHECK(worst_slack >= -1e-9);
  CHECK(worst_norm <= bound + 1e-12);

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "primal/dual gap %.2e, subgradient slack %.2e, norms <= %.3f", worst_pd,
                worst_slack, bound);
  report(5, ok, buf);
}

TEST_CASE("criterion 6: LP solver certification against enumeration") {
  std::mt19937_64 rng(161803);
  bool ok = true;
  int optimal = 0, infeasible = 0, mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    LPInstance inst = testutil::random_bounded_lp(rng, 5, 6);
    inst.normalize();
    auto brute = testutil::brute_force_lp(inst);
    LPSolution sol = solve_lp(inst);
    if (brute.feasible) {
      ++optimal;
      if (sol.status != LPStatus::Optimal ||
          std::abs(sol.objective - brute.objective) > 1e-9) {
        ok = false;
        ++mismatches;
        continue;
      }
      // strong duality / complementary slackness residuals
      double dual_obj = dot(sol.row_duals, inst.rhs);
      for (std::size_t j = 0; j < inst.num_vars(); ++j) {
        double d = inst.c[j];
        for (std::size_t r = 0; r < inst.num_rows(); ++r)
          d -= sol.row_duals[r] * inst.A(r, j);
        if (std::abs(sol.x[j] - inst.lower[j]) <= 1e-7) dual_obj += d * inst.lower[j];
        else if (std::abs(sol.x[j] - inst.upper[j]) <= 1e-7) dual_obj += d * inst.upper[j];
        else if (std::abs(d) > 1e-8) { ok = false; ++mismatches; }
      }
      if (std::abs(dual_obj - sol.objective) > 1e-8) { ok = false; ++mismatches; }
      for (std::size_t r = 0; r < inst.num_rows(); ++r) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < inst.num_vars(); ++j) lhs += inst.A(r, j) * sol.x[j];
        const double slack = inst.rhs[r] - lhs;
        if (inst.rel[r] != Relation::Equal &&
            std::abs(sol.row_duals[r] * slack) > 1e-6) {
          ok = false;
          ++mismatches;
        }
      }
    } else {
      ++infeasible;
      if (sol.status != LPStatus::Infeasible) {
        ok = false;
        ++mismatches;
      }
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "500 random LPs: %d optimal, %d infeasible, %d mismatches",
                optimal, infeasible, mismatches);
  report(6, ok, buf);
  CHECK(mismatches == 0);
  CHECK(optimal > 100);
}

TEST_CASE("criterion 7: master convergence at desk scale") {
  DecomposableLP p = generate_declp({2, 0.0});
  ReferenceSolution ref = solve_full_reference(p);
  PenaltyBound t = calibrate_penalty(p).t;
  SolverConfig cfg;
  cfg.schedule = {ScheduleKind::TwoSpeed, 5.0, 2, 0.8, 25};
  cfg.max_iter = 2000;
  cfg.record_time = false;
  RunTrace trace = run_subgradient(make_master_oracle(p, t), make_share_projector(p),
                                   initial_allocation(p).u, cfg);
  const double rel = std::abs(trace.best_value - ref.objective) / std::abs(ref.objective);
  const bool ok = rel <= 0.05;
  char buf[120];
  std::snprintf(buf, sizeof(buf), "best mu %.6f vs f* %.6f (rel gap %.4f%%)",
                trace.best_value, ref.objective, 100.0 * rel);
  report(7, ok, buf);
  CHECK(ok);
}

TEST_CASE("criterion 8: two-speed schedule laws") {
  const long N = 100000;
  // paper parameters: the two defining prefix inequalities
  StepSchedule sch{ScheduleKind::TwoSpeed, 0.1, 1, 0.7, 25};
  double sum = 0.0, sum_sq = 0.0, beta_sum = 0.0, beta_sq_sum = 0.0;
  for (long k = 0; k < N; ++k) {
    const double th = sch.step(k);
    sum += th;
    sum_sq += th * th;
  }
  for (long s = 0; s <= (N - 1) / sch.anchor_gap; ++s) {
    const double beta = sch.theta / static_cast<double>(s + sch.offset);
    beta_sum += beta;
    beta_sq_sum += beta * beta;
  }
  bool ok = sum >= beta_sum && sum_sq <= static_cast<double>(sch.anchor_gap) * beta_sq_sum;
  CHECK(sum >= beta_sum);
  CHECK(sum_sq <= static_cast<double>(sch.anchor_gap) * beta_sq_sum);

  // divergence proxy (theta = 0.1): prefix sum beyond 10 with a slow decay
  StepSchedule slow{ScheduleKind::TwoSpeed, 0.1, 1, 0.99, 100};
  double slow_sum = 0.0;
  for (long k = 0; k < N; ++k) slow_sum += slow.step(k);
  ok = ok && slow_sum > 10.0;
  CHECK(slow_sum > 10.0);

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "sum %.3f >= beta sum %.3f; sum sq %.4f <= d*beta sq %.4f; slow sum %.1f > 10",
                sum, beta_sum, sum_sq,
                static_cast<double>(sch.anchor_gap) * beta_sq_sum, slow_sum);
  report(8, ok, buf);
}

TEST_CASE("criterion 9: determinism of whole experiments") {
  auto run_once = [] {
    DecomposableLP p = generate_declp({2, 0.0});
    PenaltyBound t = calibrate_penalty(p).t;
    SolverConfig cfg;
    cfg.schedule = {ScheduleKind::TwoSpeed, 5.0, 2, 0.8, 25};
    cfg.max_iter = 300;
    cfg.record_time = false;
    RunTrace trace = run_subgradient(make_master_oracle(p, t), make_share_projector(p),
                                     initial_allocation(p).u, cfg);
    std::ostringstream os;
    trace.write_csv(os);
    return os.str();
  };
  const std::string a = run_once(), b = run_once();

  auto shor_once = [] {
    MethodResult r = run_shor({ScheduleKind::TwoSpeed, 0.1, 1, 0.7, 25}, false, {0.001}, 700);
    return r.hits[0];
  };
  const bool ok = a == b && shor_once() == shor_once();
  report(9, ok, "byte-identical master trace and repeated shor hit counts");
  CHECK(a == b);
  CHECK(shor_once() == shor_once());
}
