#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <tuple>
#include <utility>
#include <vector>

#include "rhsdecomp/errors.hpp"
#include "rhsdecomp/linalg.hpp"

namespace rhsd {

// First-order oracle: value and one subgradient at v.
using Oracle = std::function<std::pair<double, Vec>(const Vec&)>;
// Euclidean projection onto the feasible set V.
using Projector = std::function<Vec(const Vec&)>;

inline Vec identity_projection(const Vec& v) { return v; }

enum class ScheduleKind { Plain, SquareRoot, TwoSpeed };

// Divergent-series step-size rules:
//   Plain:      theta_k = theta / (k + offset)
//   SquareRoot: theta_k = theta / sqrt(k + 1)
//   TwoSpeed:   theta_k = beta_s at anchors k = s*d with beta_s = theta/(s + offset),
//               geometric decay by nu in between.
struct StepSchedule {
  ScheduleKind kind = ScheduleKind::Plain;
  double theta = 0.1;
  int offset = 1;      // 1 or 2; which (k + offset) the slow rule divides by
  double nu = 0.7;     // TwoSpeed decay, in (0, 1)
  long anchor_gap = 25;  // TwoSpeed d

  double step(long k) const {
    switch (kind) {
      case ScheduleKind::Plain:
        return theta / static_cast<double>(k + offset);
      case ScheduleKind::SquareRoot:
        return theta / std::sqrt(static_cast<double>(k + 1));
      case ScheduleKind::TwoSpeed: {
        const long s = k / anchor_gap;
        const double beta = theta / static_cast<double>(s + offset);
        return beta * std::pow(nu, static_cast<double>(k - s * anchor_gap));
      }
    }
    return 0.0;
  }
};

enum class StopStatus { TargetReached, BudgetExhausted, StationaryStop };

struct SolverConfig {
  StepSchedule schedule;
  bool normalize_subgradient = false;
  long max_iter = 10000;
  // stop once best-so-far <= *target_value + target_eps
  std::optional<double> target_value;
  double target_eps = 0.0;
  long trace_stride = 1;
  bool record_time = true;  // off for byte-reproducible traces
  double stationary_tol = 1e-14;
};

struct TraceRecord {
  long k = 0;
  double theta = 0.0;
  double value = 0.0;
  double best = 0.0;
  double elapsed_s = 0.0;
};

struct RunTrace {
  std::vector<TraceRecord> records;
  StopStatus status = StopStatus::BudgetExhausted;
  Vec final_point;
  Vec best_point;
  double best_value = 0.0;
  long iterations = 0;  // index of the last evaluated iterate

  void write_csv(std::ostream& os) const {
    os << "k,theta,f,best,elapsed_s\n";
    char buf[160];
    for (const auto& r : records) {
      std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g,%.6f\n", r.k, r.theta,
                    r.value, r.best, r.elapsed_s);
      os << buf;
    }
  }
};

namespace detail {

class Stopwatch {
public:
  explicit Stopwatch(bool enabled) : enabled_(enabled), start_(clock::now()) {}
  double seconds() const {
    if (!enabled_) return 0.0;
    return std::chrono::duration<double>(clock::now() - start_).count();
  }

private:
  using clock = std::chrono::steady_clock;
  bool enabled_;
  clock::time_point start_;
};

}  // namespace detail

// Projected subgradient method: v^{k+1} = pi_V[v^k - theta_k g^k].
inline RunTrace run_subgradient(const Oracle& oracle, const Projector& project,
                                Vec v0, const SolverConfig& cfg) {
  detail::Stopwatch watch(cfg.record_time);
  RunTrace trace;
  Vec v = std::move(v0);

  auto [value, g] = oracle(v);
  trace.best_value = value;
  trace.best_point = v;

  auto record = [&](long k, double theta) {
    if (k % cfg.trace_stride == 0)
      trace.records.push_back({k, theta, value, trace.best_value, watch.seconds()});
  };
  auto target_met = [&] {
    return cfg.target_value && trace.best_value <= *cfg.target_value + cfg.target_eps;
  };

  record(0, cfg.schedule.step(0));
  trace.iterations = 0;
  if (target_met()) {
    trace.status = StopStatus::TargetReached;
    trace.final_point = std::move(v);
    return trace;
  }

  for (long k = 0; k < cfg.max_iter; ++k) {
    const double gn = norm2(g);
    if (gn == 0.0) {
      trace.status = StopStatus::StationaryStop;
      break;
    }
    Vec dirn = g;
    if (cfg.normalize_subgradient) {
      for (double& x : dirn) x /= gn;
    }
    const double theta = cfg.schedule.step(k);
    Vec next = project(v - theta * std::move(dirn));

    const double move = norm2(next - v);
    v = std::move(next);
    std::tie(value, g) = oracle(v);
    if (value < trace.best_value) {
      trace.best_value = value;
      trace.best_point = v;
    }
    trace.iterations = k + 1;
    record(k + 1, theta);

    if (target_met()) {
      trace.status = StopStatus::TargetReached;
      break;
    }
    if (move <= cfg.stationary_tol) {
      trace.status = StopStatus::StationaryStop;
      break;
    }
    if (k + 1 == cfg.max_iter) trace.status = StopStatus::BudgetExhausted;
  }

  if (trace.records.empty() || trace.records.back().k != trace.iterations)
    trace.records.push_back({trace.iterations, cfg.schedule.step(trace.iterations), value,
                             trace.best_value, watch.seconds()});
  trace.final_point = std::move(v);
  return trace;
}

// Double averaging:
//   p^k = sum_{i<=k} g^i,  y^k = v^0 - theta_k p^k,
//   v^{k+1} = mu_k v^k + (1 - mu_k) y^k,  mu_k = (k+1)/(k+2),
// with the square-root step rule. Unconstrained (V = E) only.
inline RunTrace run_dasg(const Oracle& oracle, Vec v0, const SolverConfig& cfg) {
  detail::Stopwatch watch(cfg.record_time);
  RunTrace trace;
  const Vec anchor = v0;
  Vec v = std::move(v0);
  Vec p(v.size(), 0.0);

  auto [value, g] = oracle(v);
  trace.best_value = value;
  trace.best_point = v;

  auto record = [&](long k, double theta) {
    if (k % cfg.trace_stride == 0)
      trace.records.push_back({k, theta, value, trace.best_value, watch.seconds()});
  };
  auto target_met = [&] {
    return cfg.target_value && trace.best_value <= *cfg.target_value + cfg.target_eps;
  };

  record(0, cfg.schedule.step(0));
  trace.iterations = 0;
  if (target_met()) {
    trace.status = StopStatus::TargetReached;
    trace.final_point = std::move(v);
    return trace;
  }

  for (long k = 0; k < cfg.max_iter; ++k) {
    if (norm2(g) == 0.0) {
      trace.status = StopStatus::StationaryStop;
      break;
    }
    for (std::size_t j = 0; j < p.size(); ++j) p[j] += g[j];
    const double theta = cfg.schedule.step(k);
    const double mu = static_cast<double>(k + 1) / static_cast<double>(k + 2);
    Vec y = anchor - theta * p;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = mu * v[j] + (1.0 - mu) * y[j];

    std::tie(value, g) = oracle(v);
    if (value < trace.best_value) {
      trace.best_value = value;
      trace.best_point = v;
    }
    trace.iterations = k + 1;
    record(k + 1, theta);

    if (target_met()) {
      trace.status = StopStatus::TargetReached;
      break;
    }
    if (k + 1 == cfg.max_iter) trace.status = StopStatus::BudgetExhausted;
  }

  if (trace.records.empty() || trace.records.back().k != trace.iterations)
    trace.records.push_back({trace.iterations, cfg.schedule.step(trace.iterations), value,
                             trace.best_value, watch.seconds()});
  trace.final_point = std::move(v);
  return trace;
}

}  // namespace rhsd
