#include "fracfast/caputo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracfast {

const char* evaluator_name(EvaluatorKind kind) {
  switch (kind) {
    case EvaluatorKind::l1_direct: return "l1";
    case EvaluatorKind::l12_direct: return "l1-2";
    case EvaluatorKind::cutoff: return "cutoff";
    case EvaluatorKind::faom: return "faom";
    case EvaluatorKind::faom_pk: return "faom-pk";
  }
  return "?";
}

std::optional<EvaluatorKind> evaluator_from_name(std::string_view name) {
  if (name == "l1") return EvaluatorKind::l1_direct;
  if (name == "l1-2" || name == "l12") return EvaluatorKind::l12_direct;
  if (name == "cutoff") return EvaluatorKind::cutoff;
  if (name == "faom") return EvaluatorKind::faom;
  if (name == "faom-pk" || name == "faompk") return EvaluatorKind::faom_pk;
  return std::nullopt;
}

void SchemeConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("SchemeConfig: alpha must lie in (0,1)");
  }
  if (interp_order != 1 && interp_order != 2) {
    throw std::invalid_argument("SchemeConfig: interpolation order must be 1 or 2");
  }
  if (kind == EvaluatorKind::cutoff && window < 1) {
    throw std::invalid_argument("SchemeConfig: cutoff window must be >= 1");
  }
  if ((kind == EvaluatorKind::faom || kind == EvaluatorKind::faom_pk) && ntau < 2) {
    throw std::invalid_argument("SchemeConfig: ntau must be >= 2");
  }
  if (kind == EvaluatorKind::faom_pk) {
    if (kernel.weights.empty() || kernel.eps <= 0.0) {
      throw std::invalid_argument("SchemeConfig: faom-pk needs a certified kernel");
    }
    if (kernel.alpha != alpha) {
      throw std::invalid_argument("SchemeConfig: kernel alpha mismatch");
    }
    if (kernel.degree != degree) {
      throw std::invalid_argument("SchemeConfig: kernel degree mismatch");
    }
  }
}

SchemeConfig SchemeConfig::make(EvaluatorKind kind, double alpha, int interp_order,
                                int ntau, int degree, long long window) {
  SchemeConfig cfg;
  cfg.alpha = alpha;
  cfg.interp_order = interp_order;
  cfg.kind = kind;
  cfg.ntau = ntau;
  cfg.window = window;
  if (degree < 0) degree = (interp_order == 1) ? 4 : 9;  // the default pairings
  cfg.degree = degree;
  if (kind == EvaluatorKind::faom_pk) cfg.kernel = make_kernel(alpha, degree);
  cfg.validate();
  return cfg;
}

LocalCoefficients local_coefficients(double alpha, double h, int interp_order,
                                     long long n) {
  if (n < 1) throw std::invalid_argument("local_coefficients: n must be >= 1");
  const double base = std::pow(h, -alpha) / std::tgamma(2.0 - alpha);
  if (interp_order == 1 || n == 1) {
    return {base, -base, 0.0};
  }
  const double beta = std::pow(h, -alpha) * alpha /
                      (2.0 * (1.0 - alpha) * (2.0 - alpha) * std::tgamma(1.0 - alpha));
  return {base + beta, -base - 2.0 * beta, beta};
}

double l1_slope_weight(double alpha, double h, long long m) {
  const double p = 1.0 - alpha;
  const double bracket = std::pow(static_cast<double>(m + 1), p) -
                         std::pow(static_cast<double>(m), p);
  return std::pow(h, p) * bracket / (p * std::tgamma(1.0 - alpha));
}

double l12_curvature_weight(double alpha, double h, long long m) {
  const double p = 1.0 - alpha;
  const double md = static_cast<double>(m);
  double integral;
  if (m < 2) {
    const double b1 = std::pow(md + 1.0, p) - std::pow(md, p);
    const double b2 = std::pow(md + 1.0, p + 1.0) - std::pow(md, p + 1.0);
    integral = (md + 0.5) * b1 / p - b2 / (p + 1.0);
  } else {
    // integral = int_m^{m+1} s^{p-1} (m + 1/2 - s) ds. The direct two-power
    // difference cancels to ~1/m^2 of either term; expanding about the
    // interval midpoint c = m + 1/2 is exact and cancellation-free:
    //   -c^{p-1} sum_{odd j} C(p-1, j) c^{-j} / (2^{j+1} (j + 2)).
    const double c = md + 0.5;
    double binom = 1.0;        // C(p-1, j) by recurrence
    double cpow = 1.0 / c;     // c^{-j}
    double twopow = 0.25;      // 2^{-(j+1)}
    double sum = 0.0;
    for (int j = 1; j < 200; ++j) {
      binom *= (p - j) / j;
      if (j % 2 == 1) {
        const double term = binom * cpow * twopow / (j + 2);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
      }
      cpow /= c;
      twopow *= 0.5;
    }
    integral = -std::pow(c, p - 1.0) * sum;
  }
  return std::pow(h, 2.0 - alpha) * integral / std::tgamma(1.0 - alpha);
}

namespace {

void require_series(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("direct evaluation needs at least u^0 and u^1");
  }
}

}  // namespace

double direct_l1(std::span<const double> samples, double alpha, double h) {
  require_series(samples);
  const long long n = static_cast<long long>(samples.size()) - 1;
  double acc = 0.0;
  for (long long j = 1; j <= n; ++j) {
    const double du = (samples[j] - samples[j - 1]) / h;
    acc += du * l1_slope_weight(alpha, h, n - j);
  }
  return acc;
}

double direct_l12(std::span<const double> samples, double alpha, double h) {
  require_series(samples);
  const long long n = static_cast<long long>(samples.size()) - 1;
  double acc = 0.0;
  for (long long j = 1; j <= n; ++j) {
    const double du = (samples[j] - samples[j - 1]) / h;
    acc += du * l1_slope_weight(alpha, h, n - j);
    if (j >= 2) {
      const double d2u = (samples[j] - 2.0 * samples[j - 1] + samples[j - 2]) / (h * h);
      acc += d2u * l12_curvature_weight(alpha, h, n - j);
    }
  }
  return acc;
}

double cutoff_eval(std::span<const double> samples, double alpha, double h,
                   long long window) {
  require_series(samples);
  if (window < 1) throw std::invalid_argument("cutoff_eval: window must be >= 1");
  const long long n = static_cast<long long>(samples.size()) - 1;
  const long long j0 = std::max<long long>(0, n - window);
  double acc = 0.0;
  for (long long j = j0 + 1; j <= n; ++j) {
    const double du = (samples[j] - samples[j - 1]) / h;
    acc += du * l1_slope_weight(alpha, h, n - j);
  }
  return acc;
}

PayloadCoefficients payload_coefficients(double h, int order_count) {
  PayloadCoefficients c;
  c.slope_coef.assign(order_count, 0.0);
  c.curvature_coef.assign(order_count, 0.0);
  for (int k = 0; k < order_count; ++k) {
    if (k % 2 == 0) {
      c.slope_coef[k] = h / (k + 1);
    } else {
      c.curvature_coef[k] = h * h / (2.0 * (k + 2));
    }
  }
  return c;
}

MomentPayload build_payload(std::span<const double> samples, double h, int interp_order,
                            int degree) {
  // Two samples suffice even for J=2: that is the first interval, where the
  // quadratic interpolant degenerates to the linear one.
  if (samples.size() < 2) {
    throw std::invalid_argument("build_payload: not enough samples");
  }
  const std::size_t last = samples.size() - 1;
  const double s = (samples[last] - samples[last - 1]) / h;
  double d = 0.0;
  if (interp_order == 2 && samples.size() >= 3) {
    d = (samples[last] - 2.0 * samples[last - 1] + samples[last - 2]) / (h * h);
  }
  const PayloadCoefficients c = payload_coefficients(h, degree + 1);
  MomentPayload p(degree + 1, 1);
  for (int k = 0; k <= degree; ++k) {
    p.scalar(k) = c.slope_coef[k] * s + c.curvature_coef[k] * d;
  }
  return p;
}

double faom_eval(const HistoryLedger& ledger, double local, double alpha, double t_n) {
  const double inv_gamma = 1.0 / std::tgamma(1.0 - alpha);
  const double p = 1.0 - alpha;
  double acc = local;
  for (int i = 1; i <= ledger.length(); ++i) {
    const double lo = ledger.boundary_time(i);
    const double hi = ledger.boundary_time(i - 1);
    const double integral = (std::pow(t_n - lo, p) - std::pow(t_n - hi, p)) / p;
    const double average = ledger.payload(i).scalar(0) / (hi - lo);
    acc += average * integral * inv_gamma;
  }
  return acc;
}

double faompk_eval(const HistoryLedger& ledger, double local,
                   const KernelPolynomial& kernel, double alpha, double t_n) {
  const int order_count = static_cast<int>(kernel.weights.size());
  if (order_count != ledger.order_count()) {
    throw std::invalid_argument("faompk_eval: kernel/payload degree mismatch");
  }
  const double inv_gamma = 1.0 / std::tgamma(1.0 - alpha);
  double acc = local;
  for (int i = 1; i <= ledger.length(); ++i) {
    const double lo = ledger.boundary_time(i);
    const double hi = ledger.boundary_time(i - 1);
    const double c = 0.5 * (lo + hi);
    const double r = 0.5 * (hi - lo);
    const double base = t_n - c;
    const double ratio = r / base;
    const double scale = std::pow(base, -alpha) * inv_gamma;
    double wbar = scale;
    double sub = 0.0;
    const MomentPayload& payload = ledger.payload(i);
    for (int k = 0; k < order_count; ++k) {
      sub += kernel.weights[k] * wbar * payload.scalar(k);
      wbar *= ratio;
    }
    acc += sub;
  }
  return acc;
}

double faompk_gap_bound(const HistoryLedger& ledger, double eps, double alpha,
                        double t_n, std::span<const double> slope_bounds) {
  if (static_cast<int>(slope_bounds.size()) != ledger.length()) {
    throw std::invalid_argument("faompk_gap_bound: one slope bound per subinterval");
  }
  const double inv_gamma = 1.0 / std::tgamma(1.0 - alpha);
  double acc = 0.0;
  for (int i = 1; i <= ledger.length(); ++i) {
    const double lo = ledger.boundary_time(i);
    const double hi = ledger.boundary_time(i - 1);
    const double c = 0.5 * (lo + hi);
    acc += (hi - lo) / std::pow(t_n - c, alpha) * slope_bounds[i - 1];
  }
  return eps * inv_gamma * acc;
}

double caputo_power_oracle(double p, double alpha, double t) {
  if (p <= 0.0) throw std::invalid_argument("caputo_power_oracle: p must be positive");
  if (t < 0.0) throw std::invalid_argument("caputo_power_oracle: t must be >= 0");
  if (t == 0.0) return 0.0;
  return std::tgamma(p + 1.0) / std::tgamma(p + 1.0 - alpha) * std::pow(t, p - alpha);
}

double CaputoSeries::direct_eval() {
  // Same sums as direct_l1 / direct_l12 with the per-lag weights cached, so
  // long scaling runs do not pay two pow() calls per term.
  const long long n = n_;
  while (static_cast<long long>(slope_w_.size()) <= n) {
    const long long m = static_cast<long long>(slope_w_.size());
    slope_w_.push_back(l1_slope_weight(config_.alpha, h_, m));
    if (config_.kind == EvaluatorKind::l12_direct) {
      curv_w_.push_back(l12_curvature_weight(config_.alpha, h_, m));
    }
  }
  const double inv_h = 1.0 / h_;
  double acc = 0.0;
  for (long long j = 1; j <= n; ++j) {
    acc += (samples_[j] - samples_[j - 1]) * inv_h * slope_w_[n - j];
    if (config_.kind == EvaluatorKind::l12_direct && j >= 2) {
      acc += (samples_[j] - 2.0 * samples_[j - 1] + samples_[j - 2]) * inv_h * inv_h *
             curv_w_[n - j];
    }
  }
  return acc;
}

CaputoSeries::CaputoSeries(SchemeConfig config, double h)
    : config_(std::move(config)), h_(h) {
  config_.validate();
  if (h <= 0.0) throw std::invalid_argument("CaputoSeries: h must be positive");
  if (config_.kind == EvaluatorKind::faom) {
    ledger_.emplace(h, config_.ntau, 1, 1);
  } else if (config_.kind == EvaluatorKind::faom_pk) {
    ledger_.emplace(h, config_.ntau, config_.degree + 1, 1);
  }
}

double CaputoSeries::push(double u_new) {
  ++n_;
  last_[3] = last_[2];
  last_[2] = last_[1];
  last_[1] = last_[0];
  last_[0] = u_new;
  const bool direct = config_.kind == EvaluatorKind::l1_direct ||
                      config_.kind == EvaluatorKind::l12_direct ||
                      config_.kind == EvaluatorKind::cutoff;
  if (direct) samples_.push_back(u_new);
  if (n_ == 0) return 0.0;

  switch (config_.kind) {
    case EvaluatorKind::l1_direct:
      flops_ += static_cast<unsigned long long>(n_);
      peak_slots_ = std::max<unsigned long long>(peak_slots_, samples_.size());
      return direct_eval();
    case EvaluatorKind::l12_direct:
      flops_ += 2ULL * static_cast<unsigned long long>(n_);
      peak_slots_ = std::max<unsigned long long>(peak_slots_, samples_.size());
      return direct_eval();
    case EvaluatorKind::cutoff:
      flops_ += static_cast<unsigned long long>(std::min<long long>(n_, config_.window));
      peak_slots_ = std::max<unsigned long long>(
          peak_slots_, static_cast<unsigned long long>(config_.window) + 1);
      return cutoff_eval(samples_, config_.alpha, h_, config_.window);
    default:
      break;
  }

  // Fast kinds: absorb the completed interval [t_{n-2}, t_{n-1}], then
  // evaluate local + history at t_n.
  if (n_ >= 2) {
    const int order_count = ledger_->order_count();
    MomentPayload payload(order_count, 1);
    const double s = (last_[1] - last_[2]) / h_;
    double d = 0.0;
    if (config_.interp_order == 2 && n_ >= 3) {
      d = (last_[1] - 2.0 * last_[2] + last_[3]) / (h_ * h_);
    }
    const PayloadCoefficients c = payload_coefficients(h_, order_count);
    for (int k = 0; k < order_count; ++k) {
      payload.scalar(k) = c.slope_coef[k] * s + c.curvature_coef[k] * d;
    }
    ledger_->advance(std::move(payload));
    flops_ += static_cast<unsigned long long>(order_count);
  }
  const LocalCoefficients lc =
      local_coefficients(config_.alpha, h_, config_.interp_order, n_);
  const double local = lc.a_n * last_[0] + lc.a_nm1 * last_[1] + lc.a_nm2 * last_[2];
  const double t_n = n_ * h_;
  const unsigned long long m = static_cast<unsigned long long>(ledger_->length());
  const unsigned long long oc = static_cast<unsigned long long>(ledger_->order_count());
  flops_ += m * oc;
  peak_slots_ = std::max(peak_slots_, m * oc);
  if (config_.kind == EvaluatorKind::faom) {
    return faom_eval(*ledger_, local, config_.alpha, t_n);
  }
  return faompk_eval(*ledger_, local, config_.kernel, config_.alpha, t_n);
}

}  // namespace fracfast
