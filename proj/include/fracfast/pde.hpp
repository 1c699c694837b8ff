#pragma once

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fracfast/caputo.hpp"
#include "fracfast/history.hpp"
#include "fracfast/perf.hpp"

namespace fracfast {

enum class SpatialKind { central2, compact4 };
enum class ProblemKind { linear_forced, nonlinear_forced, fisher_abc, huxley_abc };

/// Spatial discretization of u_xx: the plain second difference plus an
/// averaging stencil applied to every non-u_xx term (identity for the
/// second-order scheme, (1,10,1)/12 for the fourth-order compact one).
struct SpatialOperator {
  SpatialKind kind = SpatialKind::central2;
  std::array<double, 3> second_difference{1.0, -2.0, 1.0};  // divided by dx^2
  std::array<double, 3> average{0.0, 1.0, 0.0};

  static SpatialOperator make(SpatialKind kind);
};

/// One additive forcing term S(x) * t^tpow; the printed sources of the test
/// problems all separate this way, which keeps the space profiles
/// precomputable per mesh.
struct SeparableTerm {
  std::function<double(double)> space;
  double tpow = 0.0;
};

struct ProblemSpec {
  std::string id;
  ProblemKind kind = ProblemKind::linear_forced;
  double alpha = 0.5;
  double xa = 0.0, xb = 1.0;
  std::function<double(double)> initial;
  std::function<double(double, double)> boundary;  // Dirichlet data, unused for ABC
  std::vector<SeparableTerm> forcing;              // f(x,t) or g(x,t)
  std::function<double(double)> reaction;          // f(u), empty for linear
  std::function<double(double, double)> exact;     // optional
  double s0 = 3.0;                                 // ABC parameter

  bool uses_abc() const {
    return kind == ProblemKind::fisher_abc || kind == ProblemKind::huxley_abc;
  }
};

struct GridSpec {
  double a = 0.0, b = 1.0;
  int cells = 4;        // N
  double h = 0.1;       // time step
  long long steps = 1;  // N_T

  double dx() const { return (b - a) / cells; }
  double horizon() const { return steps * h; }
  void validate() const;
};

struct MemoryTracePoint {
  long long n;
  int ledger_len;
  double bound_lo, bound_hi;
};

struct RunRecord {
  std::vector<double> final_field;
  std::vector<double> step_err;  // ||e^j||_inf vs exact, j = 1..N_T
  double aggregate_err = 0.0;    // sqrt(h * sum of squared step norms)
  double final_err = 0.0;
  PerfCounters counters;
  std::vector<MemoryTracePoint> memory_trace;
  std::vector<MergeEvent> merge_events;
};

struct RunOptions {
  SpatialKind spatial = SpatialKind::central2;
  bool record_memory_trace = false;
  bool record_merge_events = false;
  /// Called after each accepted step with (n, field including boundaries).
  std::function<void(long long, std::span<const double>)> step_observer;
};

/// Full time loop: payload absorption / ledger maintenance for the fast
/// kinds, implicit banded solve per step, error bookkeeping against the
/// exact solution when one is present. Deterministic given its inputs.
RunRecord run(const ProblemSpec& problem, const GridSpec& grid,
              const SchemeConfig& scheme, const RunOptions& options = {});

}  // namespace fracfast
