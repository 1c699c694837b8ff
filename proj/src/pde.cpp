#include "fracfast/pde.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "fracfast/banded.hpp"

namespace fracfast {

SpatialOperator SpatialOperator::make(SpatialKind kind) {
  SpatialOperator op;
  op.kind = kind;
  if (kind == SpatialKind::compact4) {
    op.average = {1.0 / 12.0, 10.0 / 12.0, 1.0 / 12.0};
  }
  return op;
}

void GridSpec::validate() const {
  if (cells < 4) throw std::invalid_argument("GridSpec: need at least 4 cells");
  if (!(dx() > 0.0)) throw std::invalid_argument("GridSpec: dx must be positive");
  if (!(h > 0.0)) throw std::invalid_argument("GridSpec: h must be positive");
  if (steps < 1) throw std::invalid_argument("GridSpec: N_T must be >= 1");
}

namespace {

/// Serves the history part H_i(t_n) = (1/Gamma(1-alpha)) * integral of
/// (Pi_{J,h} u)'/(t_n-tau)^alpha over [0, t_{n-1}], for all spatial nodes.
class HistoryEngine {
 public:
  virtual ~HistoryEngine() = default;
  /// Absorb the completed interval [t_{n-2}, t_{n-1}]; u_nm3 may be null
  /// (first interval, where the quadratic interpolant degrades to linear).
  virtual void absorb(long long n, std::span<const double> u_nm1,
                      std::span<const double> u_nm2, const double* u_nm3) = 0;
  virtual void history(long long n, std::span<double> out) = 0;
  virtual unsigned long long flops() const = 0;
  virtual unsigned long long stored_reals() const = 0;
  virtual const HistoryLedger* ledger() const { return nullptr; }
};

/// Direct convolution over every past interval. Rows of interpolant slopes
/// (and curvatures for J=2) are kept verbatim; the per-step sum is O(n).
/// To keep the O(N_T^2) total compute-bound instead of bandwidth-bound, the
/// old-history contribution is precomputed for blocks of B steps at a time,
/// giving each streamed row B-fold reuse. The multiply-add count is
/// unchanged; only the evaluation order differs.
class DirectEngine final : public HistoryEngine {
 public:
  DirectEngine(double alpha, double h, int interp_order, long long steps, int width,
               long long window /* <=0: none */)
      : h_(h), interp_order_(interp_order), width_(width), window_(window) {
    // Block precomputation reads weights up to m = steps + kBlock - 1.
    const long long top = steps + kBlock;
    slope_w_.resize(top + 1);
    for (long long m = 1; m <= top; ++m) slope_w_[m] = l1_slope_weight(alpha, h, m);
    if (interp_order == 2) {
      curv_w_.resize(top + 1);
      for (long long m = 1; m <= top; ++m) {
        curv_w_[m] = l12_curvature_weight(alpha, h, m);
      }
    }
    du_.reserve(static_cast<std::size_t>(std::min<long long>(steps, 1 << 12)) * width);
    if (interp_order == 2) d2u_.reserve(du_.capacity());
    if (window_ <= 0) partial_.assign(static_cast<std::size_t>(kBlock) * width, 0.0);
  }

  void absorb(long long n, std::span<const double> u_nm1,
              std::span<const double> u_nm2, const double* u_nm3) override {
    // Row j = n-1 covers [t_{n-2}, t_{n-1}].
    const std::size_t at = du_.size();
    du_.resize(at + width_);
    const double inv_h = 1.0 / h_;
    for (int i = 0; i < width_; ++i) du_[at + i] = (u_nm1[i] - u_nm2[i]) * inv_h;
    if (interp_order_ == 2) {
      d2u_.resize(at + width_);
      const double inv_h2 = inv_h * inv_h;
      for (int i = 0; i < width_; ++i) {
        d2u_[at + i] =
            u_nm3 ? (u_nm1[i] - 2.0 * u_nm2[i] + u_nm3[i]) * inv_h2 : 0.0;
      }
    }
    (void)n;
  }

  void history(long long n, std::span<double> out) override {
    std::fill(out.begin(), out.end(), 0.0);
    if (n < 2) return;
    // Window of W intervals total includes the local one, so the history
    // part starts at j = n - W + 1.
    const long long lo = window_ > 0 ? std::max<long long>(1, n - window_ + 1) : 1;
    flops_ += static_cast<unsigned long long>(n - lo) * width_ *
              (interp_order_ == 2 ? 2 : 1);
    if (window_ > 0) {
      for (long long j = lo; j <= n - 1; ++j) add_row(j, n, out);
      return;
    }
    if (n >= block_start_ + kBlock || n < block_start_) rebuild(n);
    const double* p = partial_.data() + (n - block_start_) * width_;
    std::copy(p, p + width_, out.begin());
    for (long long j = block_start_; j <= n - 1; ++j) add_row(j, n, out);
  }

  unsigned long long flops() const override { return flops_; }
  unsigned long long stored_reals() const override {
    return du_.size() + d2u_.size();
  }

 private:
  static constexpr long long kBlock = 32;
  static constexpr int kTile = 1024;

  const double* row(const std::vector<double>& arena, long long j) const {
    return arena.data() + static_cast<std::size_t>(j - 1) * width_;
  }

  void add_row(long long j, long long n, std::span<double> out) const {
    const double ca = slope_w_[n - j];
    const double* dr = row(du_, j);
    if (interp_order_ == 2) {
      const double cb = curv_w_[n - j];
      const double* cr = row(d2u_, j);
      for (int i = 0; i < width_; ++i) out[i] += ca * dr[i] + cb * cr[i];
    } else {
      for (int i = 0; i < width_; ++i) out[i] += ca * dr[i];
    }
  }

  // partial_[b] accumulates the contribution of rows 1..n0-1 to step n0+b.
  void rebuild(long long n0) {
    block_start_ = n0;
    std::fill(partial_.begin(), partial_.end(), 0.0);
    if (n0 < 2) return;
    for (int tile = 0; tile < width_; tile += kTile) {
      const int tn = std::min(kTile, width_ - tile);
      for (long long j = 1; j <= n0 - 1; ++j) {
        const double* dr = row(du_, j) + tile;
        const double* cr = interp_order_ == 2 ? row(d2u_, j) + tile : nullptr;
        for (long long b = 0; b < kBlock; ++b) {
          double* p = partial_.data() + b * width_ + tile;
          const double ca = slope_w_[n0 + b - j];
          if (cr) {
            const double cb = curv_w_[n0 + b - j];
            for (int i = 0; i < tn; ++i) p[i] += ca * dr[i] + cb * cr[i];
          } else {
            for (int i = 0; i < tn; ++i) p[i] += ca * dr[i];
          }
        }
      }
    }
  }

  double h_;
  int interp_order_;
  int width_;
  long long window_;
  std::vector<double> slope_w_, curv_w_;
  std::vector<double> du_, d2u_;       // row-major interval rows
  std::vector<double> partial_;
  long long block_start_ = -(1LL << 40);
  unsigned long long flops_ = 0;
};

/// Compressed history: one vector-valued ledger shared by all spatial nodes,
/// evaluated with exact kernel integrals (order 0, the averaging scheme) or
/// the certified kernel polynomial (K+1 moments).
class FastEngine final : public HistoryEngine {
 public:
  FastEngine(const SchemeConfig& scheme, double h, int width)
      : scheme_(scheme), h_(h), width_(width),
        order_count_(scheme.kind == EvaluatorKind::faom ? 1 : scheme.degree + 1),
        ledger_(h, scheme.ntau, order_count_, width),
        coef_(payload_coefficients(h, order_count_)),
        inv_gamma_(1.0 / std::tgamma(1.0 - scheme.alpha)) {}

  void absorb(long long /*n*/, std::span<const double> u_nm1,
              std::span<const double> u_nm2, const double* u_nm3) override {
    MomentPayload payload(order_count_, width_);
    const double inv_h = 1.0 / h_;
    const double inv_h2 = inv_h * inv_h;
    for (int k = 0; k < order_count_; ++k) {
      std::span<double> mk = payload.moment(k);
      if (k % 2 == 0) {
        const double c = coef_.slope_coef[k] * inv_h;
        for (int i = 0; i < width_; ++i) mk[i] = c * (u_nm1[i] - u_nm2[i]);
      } else if (scheme_.interp_order == 2 && u_nm3) {
        const double c = coef_.curvature_coef[k] * inv_h2;
        for (int i = 0; i < width_; ++i) {
          mk[i] = c * (u_nm1[i] - 2.0 * u_nm2[i] + u_nm3[i]);
        }
      }
    }
    ledger_.advance(std::move(payload));
    flops_ += static_cast<unsigned long long>(order_count_) * width_;
    const unsigned long long held = static_cast<unsigned long long>(ledger_.length()) *
                                    order_count_ * width_;
    peak_ = std::max(peak_, held);
  }

  void history(long long n, std::span<double> out) override {
    std::fill(out.begin(), out.end(), 0.0);
    const double t_n = n * h_;
    const double p = 1.0 - scheme_.alpha;
    for (int s = 1; s <= ledger_.length(); ++s) {
      const double lo = ledger_.boundary_time(s);
      const double hi = ledger_.boundary_time(s - 1);
      if (order_count_ == 1) {
        const double integral = (std::pow(t_n - lo, p) - std::pow(t_n - hi, p)) / p;
        const double c = integral * inv_gamma_ / (hi - lo);
        std::span<const double> m0 = ledger_.payload(s).moment(0);
        for (int i = 0; i < width_; ++i) out[i] += c * m0[i];
      } else {
        const double center = 0.5 * (lo + hi);
        const double ratio = 0.5 * (hi - lo) / (t_n - center);
        double wbar = std::pow(t_n - center, -scheme_.alpha) * inv_gamma_;
        const MomentPayload& payload = ledger_.payload(s);
        for (int k = 0; k < order_count_; ++k) {
          const double c = scheme_.kernel.weights[k] * wbar;
          std::span<const double> mk = payload.moment(k);
          for (int i = 0; i < width_; ++i) out[i] += c * mk[i];
          wbar *= ratio;
        }
      }
    }
    flops_ += static_cast<unsigned long long>(ledger_.length()) * order_count_ * width_;
  }

  unsigned long long flops() const override { return flops_; }
  unsigned long long stored_reals() const override { return peak_; }
  const HistoryLedger* ledger() const override { return &ledger_; }
  HistoryLedger& mutable_ledger() { return ledger_; }

 private:
  SchemeConfig scheme_;
  double h_;
  int width_;
  int order_count_;
  HistoryLedger ledger_;
  PayloadCoefficients coef_;
  double inv_gamma_;
  unsigned long long flops_ = 0;
  unsigned long long peak_ = 0;
};

std::unique_ptr<HistoryEngine> make_engine(const SchemeConfig& scheme, double h,
                                           long long steps, int width) {
  switch (scheme.kind) {
    case EvaluatorKind::l1_direct:
      return std::make_unique<DirectEngine>(scheme.alpha, h, 1, steps, width, 0);
    case EvaluatorKind::l12_direct:
      return std::make_unique<DirectEngine>(scheme.alpha, h, 2, steps, width, 0);
    case EvaluatorKind::cutoff:
      return std::make_unique<DirectEngine>(scheme.alpha, h, 1, steps, width,
                                            scheme.window);
    case EvaluatorKind::faom:
    case EvaluatorKind::faom_pk:
      return std::make_unique<FastEngine>(scheme, h, width);
  }
  throw std::logic_error("make_engine: unknown evaluator kind");
}

int effective_interp_order(const SchemeConfig& scheme) {
  switch (scheme.kind) {
    case EvaluatorKind::l1_direct:
    case EvaluatorKind::cutoff:
      return 1;
    case EvaluatorKind::l12_direct:
      return 2;
    default:
      return scheme.interp_order;
  }
}

}  // namespace

RunRecord run(const ProblemSpec& problem, const GridSpec& grid,
              const SchemeConfig& scheme, const RunOptions& options) {
  const auto t_begin = std::chrono::steady_clock::now();
  grid.validate();
  scheme.validate();
  if (scheme.alpha != problem.alpha) {
    throw std::invalid_argument("run: scheme alpha differs from problem alpha");
  }
  if (problem.uses_abc() && options.spatial != SpatialKind::central2) {
    throw std::invalid_argument("run: boundary closure rows assume the central stencil");
  }
  if (!problem.uses_abc() && !problem.boundary) {
    throw std::invalid_argument("run: Dirichlet problem without boundary data");
  }
  if (grid.a != problem.xa || grid.b != problem.xb) {
    throw std::invalid_argument("run: grid endpoints differ from the problem domain");
  }

  const int nodes = grid.cells + 1;
  const double dx = grid.dx();
  const double h = grid.h;
  const double alpha = problem.alpha;
  const int interp_order = effective_interp_order(scheme);
  const SpatialOperator op = SpatialOperator::make(options.spatial);

  std::vector<double> x(nodes);
  for (int i = 0; i < nodes; ++i) x[i] = grid.a + i * dx;

  // Forcing space profiles, evaluated once per mesh.
  std::vector<std::vector<double>> profiles;
  for (const SeparableTerm& term : problem.forcing) {
    std::vector<double> s(nodes);
    for (int i = 0; i < nodes; ++i) s[i] = term.space(x[i]);
    profiles.push_back(std::move(s));
  }

  std::vector<double> u_prev(nodes), u_prev2, u_prev3;
  for (int i = 0; i < nodes; ++i) u_prev[i] = problem.initial(x[i]);

  auto engine = make_engine(scheme, h, grid.steps, nodes);
  RunRecord record;
  auto* fast = dynamic_cast<FastEngine*>(engine.get());
  if (fast && options.record_merge_events) {
    fast->mutable_ledger().set_merge_sink(
        [&](const MergeEvent& e) { record.merge_events.push_back(e); });
  }

  std::vector<double> hist(nodes), rterm(nodes), rhs(nodes), u_cur(nodes);
  std::vector<double> extrap(nodes), averaged(nodes);
  std::vector<double> sub(nodes - 1), diag(nodes), sup(nodes - 1);
  BandedMatrix band(nodes, 2, 2);
  unsigned long long solve_flops = 0;

  if (problem.exact) record.step_err.reserve(grid.steps);

  for (long long n = 1; n <= grid.steps; ++n) {
    const double t = n * h;
    if (n >= 2) {
      engine->absorb(n, u_prev, u_prev2, n >= 3 ? u_prev3.data() : nullptr);
      if (fast && options.record_memory_trace) {
        double lo = 0.0, hi = 0.0;
        HistoryLedger::length_bounds(n, scheme.ntau, lo, hi);
        record.memory_trace.push_back({n, fast->mutable_ledger().length(), lo, hi});
      }
    }
    engine->history(n, hist);
    const LocalCoefficients lc = local_coefficients(alpha, h, interp_order, n);

    // Reaction at the extrapolated field, then the separable forcing.
    std::fill(rterm.begin(), rterm.end(), 0.0);
    if (problem.reaction) {
      if (n == 1) {
        extrap = u_prev;
      } else if (interp_order == 1 || n == 2) {
        for (int i = 0; i < nodes; ++i) extrap[i] = 2.0 * u_prev[i] - u_prev2[i];
      } else {
        for (int i = 0; i < nodes; ++i) {
          extrap[i] = 3.0 * u_prev[i] - 3.0 * u_prev2[i] + u_prev3[i];
        }
      }
      for (int i = 0; i < nodes; ++i) rterm[i] = problem.reaction(extrap[i]);
    }
    for (std::size_t k = 0; k < profiles.size(); ++k) {
      const double tp = std::pow(t, problem.forcing[k].tpow);
      const std::vector<double>& s = profiles[k];
      for (int i = 0; i < nodes; ++i) rterm[i] += tp * s[i];
    }

    for (int i = 0; i < nodes; ++i) {
      rhs[i] = rterm[i] - lc.a_nm1 * u_prev[i] - hist[i];
    }
    if (lc.a_nm2 != 0.0 && n >= 2) {
      for (int i = 0; i < nodes; ++i) rhs[i] -= lc.a_nm2 * u_prev2[i];
    }

    if (!problem.uses_abc()) {
      // (a_n A - L) u = A rhs, Dirichlet rows pinned.
      for (int i = 1; i < nodes - 1; ++i) {
        averaged[i] = op.average[0] * rhs[i - 1] + op.average[1] * rhs[i] +
                      op.average[2] * rhs[i + 1];
      }
      const double inv_dx2 = 1.0 / (dx * dx);
      diag[0] = 1.0;
      sup[0] = 0.0;
      averaged[0] = problem.boundary(grid.a, t);
      for (int i = 1; i < nodes - 1; ++i) {
        sub[i - 1] = lc.a_n * op.average[0] - op.second_difference[0] * inv_dx2;
        diag[i] = lc.a_n * op.average[1] - op.second_difference[1] * inv_dx2;
        sup[i] = lc.a_n * op.average[2] - op.second_difference[2] * inv_dx2;
      }
      sub[nodes - 2] = 0.0;
      diag[nodes - 1] = 1.0;
      averaged[nodes - 1] = problem.boundary(grid.b, t);
      u_cur = averaged;
      solve_tridiag(sub, diag, sup, u_cur);
      solve_flops += 5ULL * nodes;
    } else {
      // Interior rows of the central scheme plus the two closure rows
      // derived from the one-way operators at x_1 and x_{N-1}.
      band.clear();
      const double inv_dx2 = 1.0 / (dx * dx);
      const double inv_2dx = 1.0 / (2.0 * dx);
      std::vector<double>& brhs = averaged;
      for (int i = 1; i < nodes - 1; ++i) {
        band.at(i, i - 1) = -inv_dx2;
        band.at(i, i) = lc.a_n + 2.0 * inv_dx2;
        band.at(i, i + 1) = -inv_dx2;
        brhs[i] = rhs[i];
      }
      const double s0a2 = 3.0 * std::pow(problem.s0, 0.5 * alpha);
      const double s0a = 3.0 * std::pow(problem.s0, alpha);
      const double s0a32 = std::pow(problem.s0, 1.5 * alpha);
      // "low" is the known part of the discrete derivative at a node.
      auto low = [&](int i) {
        double v = lc.a_nm1 * u_prev[i] + hist[i];
        if (lc.a_nm2 != 0.0 && n >= 2) v += lc.a_nm2 * u_prev2[i];
        return v;
      };
      // Row 0 <- closure at x_1 with the minus signs.
      band.at(0, 0) = -(lc.a_n + s0a) * inv_2dx;
      band.at(0, 1) = -(s0a2 * lc.a_n + s0a32);
      band.at(0, 2) = (lc.a_n + s0a) * inv_2dx;
      brhs[0] = (rterm[2] - rterm[0]) * inv_2dx - s0a2 * rterm[1] -
                (low(2) - low(0)) * inv_2dx + s0a2 * low(1);
      // Row N <- closure at x_{N-1} with the plus signs.
      const int nn = nodes - 1;
      band.at(nn, nn - 2) = -(lc.a_n + s0a) * inv_2dx;
      band.at(nn, nn - 1) = s0a2 * lc.a_n + s0a32;
      band.at(nn, nn) = (lc.a_n + s0a) * inv_2dx;
      brhs[nn] = (rterm[nn] - rterm[nn - 2]) * inv_2dx + s0a2 * rterm[nn - 1] -
                 (low(nn) - low(nn - 2)) * inv_2dx - s0a2 * low(nn - 1);
      u_cur = brhs;
      band.solve(u_cur);
      solve_flops += 12ULL * nodes;
    }

    if (problem.exact) {
      double err = 0.0;
      for (int i = 0; i < nodes; ++i) {
        err = std::max(err, std::abs(u_cur[i] - problem.exact(x[i], t)));
      }
      record.step_err.push_back(err);
    }
    if (options.step_observer) options.step_observer(n, u_cur);

    u_prev3.swap(u_prev2);
    u_prev2.swap(u_prev);
    u_prev = u_cur;
  }

  record.final_field = std::move(u_prev);
  if (problem.exact) {
    double sum = 0.0;
    for (double e : record.step_err) sum += e * e;
    record.aggregate_err = std::sqrt(h * sum);
    record.final_err = record.step_err.back();
  }
  record.counters.flops = engine->flops() + solve_flops;
  record.counters.slots = engine->stored_reals();
  record.counters.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t_begin)
          .count();
  return record;
}

}  // namespace fracfast
