#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fracfast/history.hpp"
#include "fracfast/kernel.hpp"

namespace fracfast {

enum class EvaluatorKind { l1_direct, l12_direct, cutoff, faom, faom_pk };

const char* evaluator_name(EvaluatorKind kind);
std::optional<EvaluatorKind> evaluator_from_name(std::string_view name);

/// How one Caputo evaluation is configured. `interp_order` is J in {1,2};
/// `degree` (K) and `kernel` apply to faom_pk, `window` (S-bar) to cutoff,
/// `ntau` to the fast kinds.
struct SchemeConfig {
  double alpha = 0.5;
  int interp_order = 1;
  EvaluatorKind kind = EvaluatorKind::l1_direct;
  int ntau = 2;
  int degree = 4;
  long long window = 10;
  KernelPolynomial kernel;

  void validate() const;  // throws std::invalid_argument on a bad combination
  static SchemeConfig make(EvaluatorKind kind, double alpha, int interp_order,
                           int ntau = 2, int degree = -1, long long window = 10);
};

/// Coefficients of the implicit/local part of the discrete derivative at
/// step n: local = a_n u^n + a_nm1 u^{n-1} + a_nm2 u^{n-2}. They sum to 0.
struct LocalCoefficients {
  double a_n = 0.0;
  double a_nm1 = 0.0;
  double a_nm2 = 0.0;
};

LocalCoefficients local_coefficients(double alpha, double h, int interp_order,
                                     long long n);

/// Closed-form per-interval kernel integrals, m = n - j >= 0:
///   slope_weight(m)     = integral over [t_{j-1}, t_j] of (t_n - tau)^-alpha
///   curvature_weight(m) = same integral against (tau - t_{j-1/2})
/// Both already divided by Gamma(1 - alpha).
double l1_slope_weight(double alpha, double h, long long m);
double l12_curvature_weight(double alpha, double h, long long m);

/// Direct evaluations at t_n = (samples.size()-1) * h from u^0..u^n.
double direct_l1(std::span<const double> samples, double alpha, double h);
double direct_l12(std::span<const double> samples, double alpha, double h);
double cutoff_eval(std::span<const double> samples, double alpha, double h,
                   long long window);

/// Per-moment coefficients of a freshly built payload on an interval of
/// length h: M_k = slope_coef[k] * s + curvature_coef[k] * d, where s is the
/// interpolant slope and d its second-difference coefficient (J = 2 only).
struct PayloadCoefficients {
  std::vector<double> slope_coef;      // h/(k+1) for even k, else 0
  std::vector<double> curvature_coef;  // h^2/(2(k+2)) for odd k, else 0
};
PayloadCoefficients payload_coefficients(double h, int order_count);

/// Moments of (Pi_{J,h} u)' on [t_{n-2}, t_{n-1}] from the newest samples
/// (2 values for J=1, 3 for J=2; J=2 with 2 values means the first interval,
/// where the quadratic interpolant degenerates to the linear one).
MomentPayload build_payload(std::span<const double> samples, double h, int interp_order,
                            int degree);

/// History part of the derivative at t_n from a ledger of order-0 moments
/// (interval averages up to the gap factor), exact kernel integrals.
/// `local` is added through unchanged.
double faom_eval(const HistoryLedger& ledger, double local, double alpha, double t_n);

/// History part at t_n from a ledger of K+1 moments and the polynomial
/// kernel approximation: local + sum_i sum_k wbar_k^i M_{i,k} / Gamma(1-a)
/// with wbar_k^i = w_k r_i^k / (t_n - c_i)^{k+alpha}.
double faompk_eval(const HistoryLedger& ledger, double local,
                   const KernelPolynomial& kernel, double alpha, double t_n);

/// Explicit bound on |faompk - direct|: the kernel-approximation error
/// accumulated subinterval by subinterval,
///   eps/Gamma(1-a) * sum_i gap_i / (t_n - c_i)^alpha * max_i|(Pi u)'|.
/// `slope_bounds` holds max|(Pi u)'| per subinterval, newest first.
double faompk_gap_bound(const HistoryLedger& ledger, double eps, double alpha,
                        double t_n, std::span<const double> slope_bounds);

/// Exact Caputo derivative of t^p: Gamma(p+1)/Gamma(p+1-alpha) * t^(p-alpha).
double caputo_power_oracle(double p, double alpha, double t);

/// Streaming scalar evaluator: push u^n, get the discrete derivative at t_n.
/// Drives all five kinds through one interface; used by tests and the
/// complexity experiment. Counts kernel multiply-adds when asked.
class CaputoSeries {
 public:
  CaputoSeries(SchemeConfig config, double h);

  double push(double u_new);  // returns D^alpha u at t_n; 0 at n = 0

  long long step() const { return n_; }
  unsigned long long flops() const { return flops_; }
  unsigned long long peak_slots() const { return peak_slots_; }
  const HistoryLedger* ledger() const { return ledger_ ? &*ledger_ : nullptr; }

 private:
  double direct_eval();

  SchemeConfig config_;
  double h_;
  long long n_ = -1;
  std::vector<double> samples_;              // direct kinds keep everything
  std::vector<double> slope_w_, curv_w_;     // cached per-lag kernel weights
  double last_[4] = {0.0, 0.0, 0.0, 0.0};    // u^n .. u^{n-3}
  std::optional<HistoryLedger> ledger_;   // fast kinds
  unsigned long long flops_ = 0;
  unsigned long long peak_slots_ = 0;
};

}  // namespace fracfast
