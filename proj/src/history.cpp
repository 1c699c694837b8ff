#include "fracfast/history.hpp"

#include <cmath>
#include <stdexcept>

namespace fracfast {

namespace {

// Integer power; ipow(0, 0) == 1 as required by the binomial expansion.
double ipow(double base, int e) {
  double acc = 1.0;
  for (int i = 0; i < e; ++i) acc *= base;
  return acc;
}

}  // namespace

MomentPayload recombine_moments(std::span<const MomentPayload> group_newest_first,
                                std::span<const long long> group_gaps,
                                int ntau, int order_count) {
  if (static_cast<int>(group_newest_first.size()) != ntau ||
      static_cast<int>(group_gaps.size()) != ntau) {
    throw std::invalid_argument("recombine_moments: group size must equal ntau");
  }
  for (long long g : group_gaps) {
    if (g != group_gaps[0]) {
      throw std::invalid_argument("recombine_moments: group gaps must be equal");
    }
  }
  const int width = group_newest_first[0].width();
  for (const MomentPayload& p : group_newest_first) {
    if (p.order_count() != order_count || p.width() != width) {
      throw std::invalid_argument("recombine_moments: payload shape mismatch");
    }
  }

  // Pascal triangle up to order_count-1.
  std::vector<std::vector<double>> choose(order_count);
  for (int k = 0; k < order_count; ++k) {
    choose[k].assign(static_cast<std::size_t>(k) + 1, 1.0);
    for (int l = 1; l < k; ++l) choose[k][l] = choose[k - 1][l - 1] + choose[k - 1][l];
  }

  MomentPayload merged(order_count, width);
  for (int k = 0; k < order_count; ++k) {
    const double scale = 1.0 / ipow(static_cast<double>(ntau), k);
    std::span<double> out = merged.moment(k);
    for (int j = 0; j < ntau; ++j) {
      const double shift = static_cast<double>(ntau - 2 * j - 1);
      for (int l = 0; l <= k; ++l) {
        const double coef = choose[k][l] * scale * ipow(shift, k - l);
        if (coef == 0.0) continue;
        std::span<const double> in = group_newest_first[j].moment(l);
        for (int i = 0; i < width; ++i) out[i] += coef * in[i];
      }
    }
  }
  return merged;
}

HistoryLedger::HistoryLedger(double h, int ntau, int order_count, int width)
    : h_(h), ntau_(ntau), order_count_(order_count), width_(width) {
  if (h <= 0.0) throw std::invalid_argument("HistoryLedger: h must be positive");
  if (ntau < 2) throw std::invalid_argument("HistoryLedger: ntau must be >= 2");
  if (order_count < 1 || width < 1) {
    throw std::invalid_argument("HistoryLedger: bad payload shape");
  }
}

void HistoryLedger::prepend(MomentPayload payload) {
  if (payload.order_count() != order_count_ || payload.width() != width_) {
    throw std::invalid_argument("HistoryLedger::prepend: payload shape mismatch");
  }
  ++step_;
  // New head I_0 = t_{n-1}; the old head becomes the start of the newest
  // subinterval [t_{n-2}, t_{n-1}].
  boundaries_.insert(boundaries_.begin(), step_ - 1);
  payloads_.insert(payloads_.begin(), std::move(payload));
}

void HistoryLedger::merge_pass(MergeCadence cadence) {
  const int run = 2 * ntau_ - 1;
  bool merged_any = true;
  while (merged_any) {
    merged_any = false;
    const int m = length();
    const int candidates = m - run + 1;
    for (int scan = 0; scan < candidates; ++scan) {
      // The cascade rescans from the newest run; the published cadence
      // consumes the oldest candidate run and stops for this step.
      const int i0 =
          cadence == MergeCadence::single_oldest ? candidates - 1 - scan : scan;
      const long long g = gap_steps(i0 + 1);
      bool equal = true;
      for (int k = 2; k <= run; ++k) {
        if (gap_steps(i0 + k) != g) {
          equal = false;
          break;
        }
      }
      if (!equal) continue;

      // Merge the oldest ntau subintervals of the run: indices
      // i0+ntau .. i0+2*ntau-1, newest of the group first.
      const int first = i0 + ntau_;  // 1-based subinterval index
      std::vector<long long> gaps(static_cast<std::size_t>(ntau_), g);
      MomentPayload merged = recombine_moments(
          std::span<const MomentPayload>(payloads_.data() + (first - 1),
                                         static_cast<std::size_t>(ntau_)),
          gaps, ntau_, order_count_);
      // Drop interior boundaries I_{first} .. I_{first+ntau-2}.
      boundaries_.erase(boundaries_.begin() + first,
                        boundaries_.begin() + first + ntau_ - 1);
      payloads_.erase(payloads_.begin() + (first - 1),
                      payloads_.begin() + (first - 1) + ntau_);
      payloads_.insert(payloads_.begin() + (first - 1), std::move(merged));

      if (merge_sink_) merge_sink_({step_, i0, g, length()});
      merged_any = cadence == MergeCadence::cascade;
      break;
    }
  }
}

StructureReport HistoryLedger::check_structure() const {
  const int m = length();
  if (m == 0) return {};

  if (boundaries_.front() != step_ - 1) {
    return {false, "head boundary is not t_{n-1}"};
  }
  if (boundaries_.back() != 0) return {false, "last boundary is not 0"};
  for (int i = 1; i <= m; ++i) {
    if (gap_steps(i) <= 0) return {false, "boundaries not strictly decreasing"};
  }

  // Gaps are pure powers of ntau with non-decreasing exponents (newest ->
  // oldest) and consecutive ratio 1 or ntau.
  std::vector<int> expo(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    long long g = gap_steps(i);
    int e = 0;
    while (g % ntau_ == 0) {
      g /= ntau_;
      ++e;
    }
    if (g != 1) return {false, "gap is not a power of ntau times h"};
    expo[i - 1] = e;
  }
  for (int i = 1; i < m; ++i) {
    if (expo[i] < expo[i - 1]) return {false, "gap exponents decrease with age"};
    if (expo[i] - expo[i - 1] > 1) return {false, "gap ratio exceeds ntau"};
  }

  // Count bound per exponent strictly below the maximum present.
  for (int e = 0; e < expo.back(); ++e) {
    int count = 0;
    for (int v : expo) count += (v == e);
    if (count < ntau_ - 1 || count > 2 * ntau_ - 2) {
      return {false, "exponent multiplicity outside [ntau-1, 2*ntau-2]"};
    }
  }

  // Half-ratio bound: (I_{i-1} - I_i) / (t_n - I_i) <= 1/2 for every
  // subinterval, with t_n the evaluation time of the current step.
  for (int i = 1; i <= m; ++i) {
    if (2 * gap_steps(i) > step_ - boundaries_[i]) {
      return {false, "half-ratio bound violated"};
    }
  }

  double lower = 0.0, upper = 0.0;
  length_bounds(step_, ntau_, lower, upper);
  // Equality is attainable in both bounds; allow an ulp-scale cushion so the
  // floating-point logarithms cannot reject an integer M on the boundary.
  const double cushion = 1e-9 * std::max(1.0, upper);
  if (static_cast<double>(m) < lower - cushion ||
      static_cast<double>(m) > upper + cushion) {
    return {false, "ledger length outside the log bounds"};
  }

  for (const MomentPayload& p : payloads_) {
    if (p.order_count() != order_count_ || p.width() != width_) {
      return {false, "payload shape mismatch"};
    }
  }
  return {};
}

HistoryLedger HistoryLedger::from_boundaries(double h, int ntau, int order_count,
                                             int width,
                                             std::vector<long long> boundaries) {
  if (boundaries.empty()) {
    throw std::invalid_argument("from_boundaries: need at least one boundary");
  }
  HistoryLedger ledger(h, ntau, order_count, width);
  ledger.step_ = boundaries.front() + 1;
  ledger.boundaries_ = std::move(boundaries);
  ledger.payloads_.assign(ledger.boundaries_.size() - 1,
                          MomentPayload(order_count, width));
  return ledger;
}

void HistoryLedger::length_bounds(long long n, int ntau, double& lower, double& upper) {
  const double logn = std::log(static_cast<double>(n)) / std::log(static_cast<double>(ntau));
  const double loghalf =
      std::log((static_cast<double>(n) + 1.0) / 2.0) / std::log(static_cast<double>(ntau));
  lower = (ntau - 1) * (logn - 1.0);
  upper = 2.0 * (ntau - 1) * loghalf;
}

}  // namespace fracfast
