#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fracfast {

/// The K+1 scaled moments of (Pi_{J,h} u)' on one subinterval:
///   M_k = integral of (Pi u)' * ((tau - c) / r)^k  over the subinterval,
/// with c the midpoint and r the half-width. Each moment is a block of
/// `width` reals so the same payload serves scalar drivers (width 1) and
/// PDE fields (width = number of spatial nodes).
class MomentPayload {
 public:
  MomentPayload() = default;
  MomentPayload(int order_count, int width)
      : order_count_(order_count),
        width_(width),
        data_(static_cast<std::size_t>(order_count) * width, 0.0) {}

  int order_count() const { return order_count_; }
  int width() const { return width_; }

  std::span<double> moment(int k) {
    return {data_.data() + static_cast<std::size_t>(k) * width_,
            static_cast<std::size_t>(width_)};
  }
  std::span<const double> moment(int k) const {
    return {data_.data() + static_cast<std::size_t>(k) * width_,
            static_cast<std::size_t>(width_)};
  }

  // Scalar accessors for width-1 payloads.
  double scalar(int k) const { return data_[static_cast<std::size_t>(k)]; }
  double& scalar(int k) { return data_[static_cast<std::size_t>(k)]; }

 private:
  int order_count_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

/// Exact algebraic recombination of the moments of `ntau` adjacent
/// equal-length subintervals into the moments of their union:
///   merged_k = sum_j sum_{l<=k} C(k,l) ntau^{-k} (ntau-2j-1)^{k-l} M_{j,l},
/// j = 0 being the newest subinterval of the group (largest boundaries).
/// No quadrature is performed; the identity is exact for any integrand.
MomentPayload recombine_moments(std::span<const MomentPayload> group_newest_first,
                                std::span<const long long> group_gaps,
                                int ntau, int order_count);

struct MergeEvent {
  long long step;        // time-step index n at which the merge fired
  int i0;                // anchor index of the equal-gap run (0 = newest)
  long long gap_in_h;    // common gap length of the run, in units of h
  int length_after;      // ledger length M after the merge
};

struct StructureReport {
  bool pass = true;
  std::string violation;  // first violated predicate, empty on pass
};

/// How aggressively the optimization step consolidates equal-gap runs.
/// `cascade` repeats the merge until no candidate run remains (the stated
/// form of the optimization step; all structural count bounds hold).
/// `single_oldest` fires at most one merge per step, preferring the oldest
/// candidate run; this is the cadence that reproduces the published
/// accuracy tables, and it keeps the length and half-ratio bounds intact
/// while letting run multiplicities overshoot transiently.
enum class MergeCadence { cascade, single_oldest };

/// Compressed history ledger: a strictly decreasing boundary list
/// I_0 > I_1 > ... > I_M (I_0 = t_{n-1}, I_M = 0) with one MomentPayload per
/// subinterval [I_i, I_{i-1}]. Boundaries are kept as integer multiples of h
/// so equal-gap tests are exact. Single writer; concurrent reads are safe
/// once mutation stops.
class HistoryLedger {
 public:
  HistoryLedger(double h, int ntau, int order_count, int width);

  /// Step 1 of the update: absorb the payload built on [t_{n-2}, t_{n-1}]
  /// and advance the head boundary to t_{n-1}. Increments the step index.
  void prepend(MomentPayload payload);

  /// Step 2 of the update: merge the oldest ntau subintervals of a run of
  /// 2*ntau-1 equal gaps (boundaries dropped, moments recombined exactly).
  /// Under the cascade cadence the scan restarts from the newest run after
  /// every merge and repeats until no run remains.
  void merge_pass(MergeCadence cadence = MergeCadence::cascade);

  void advance(MomentPayload payload, MergeCadence cadence = MergeCadence::cascade) {
    prepend(std::move(payload));
    merge_pass(cadence);
  }

  long long step() const { return step_; }
  double h() const { return h_; }
  int ntau() const { return ntau_; }
  int order_count() const { return order_count_; }
  int width() const { return width_; }

  /// Number of subintervals M (0 before the first prepend).
  int length() const { return static_cast<int>(payloads_.size()); }

  /// Boundary I_i as a step index (i = 0..M, descending, I_0 = n-1).
  long long boundary_step(int i) const { return boundaries_[i]; }
  double boundary_time(int i) const { return boundaries_[i] * h_; }
  /// Gap I_{i-1} - I_i in units of h, i = 1..M.
  long long gap_steps(int i) const { return boundaries_[i - 1] - boundaries_[i]; }

  const MomentPayload& payload(int i) const { return payloads_[i - 1]; }  // i = 1..M

  /// Verifies the structural properties of the merged subinterval set, the
  /// half-ratio bound and the length bounds. Reports, never throws.
  StructureReport check_structure() const;

  /// Lemma bounds on the ledger length at step n:
  /// (ntau-1)(log_ntau n - 1) <= M <= 2(ntau-1) log_ntau((n+1)/2).
  static void length_bounds(long long n, int ntau, double& lower, double& upper);

  void set_merge_sink(std::function<void(const MergeEvent&)> sink) {
    merge_sink_ = std::move(sink);
  }

  /// Diagnostic constructor: a ledger in an arbitrary boundary state with
  /// zero payloads. `boundaries` are descending step indices ending at 0.
  static HistoryLedger from_boundaries(double h, int ntau, int order_count, int width,
                                       std::vector<long long> boundaries);

 private:
  double h_;
  int ntau_;
  int order_count_;
  int width_;
  long long step_ = 1;                  // ledger is empty until step 2
  std::vector<long long> boundaries_{0};  // I_0..I_M as step indices
  std::vector<MomentPayload> payloads_;   // payload i-1 <-> [I_i, I_{i-1}]
  std::function<void(const MergeEvent&)> merge_sink_;
};

}  // namespace fracfast
