#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fracfast/pde.hpp"
#include "fracfast/perf.hpp"

namespace fracfast {

/// Per-step max-norm errors and the time-integrated aggregate
/// E = sqrt(h * sum_j ||e^j||_inf^2).
struct ErrorRecord {
  std::vector<double> step_inf;
  double aggregate = 0.0;
  double final_inf = 0.0;
};

ErrorRecord error_metrics(std::span<const std::vector<double>> numeric,
                          std::span<const std::vector<double>> reference, double h);

/// log2(E_coarse / E_fine) for grids halved between the two runs.
double observed_order(double e_coarse, double e_fine);

// ---- Problem catalogue -----------------------------------------------------

/// Linear diffusion on [0, pi] with the polynomial-exponential exact
/// solution x^4 (pi-x)^4 [e^-x t^(3+alpha) + 1] and its printed source term.
ProblemSpec example31(double alpha);

/// Same solution driven through the nonlinear form with f(u) = 0.01 u (1-u)
/// and the correspondingly adjusted source. The initial data is the exact
/// solution's t = 0 trace.
ProblemSpec example41(double alpha);

/// Fisher reaction-diffusion on [-6, 6], Gaussian initial hump, absorbing
/// boundary closure, f(u) = -u(1-u). Default alpha 0.25.
ProblemSpec fisher();

/// Huxley nerve-impulse equation on [-8, 8], double Gaussian initial data,
/// absorbing boundary closure, f(u) = -0.1 u (1-u)(u-0.001). Default 0.5.
ProblemSpec huxley();

/// Linear-in-time / quadratic-in-space manufactured solution
/// (1+t)(1+x+x^2) on [0, 1]: both discretizations are exact on it, so any
/// scheme defect shows up at full precision.
ProblemSpec manufactured_linear(double alpha);

// ---- Table machinery -------------------------------------------------------

/// Reference solution on a (finer) mesh over the same domain; coarse-node
/// values are exact subsamples, so ref.cells must be a multiple of the
/// compared grid's cell count.
struct ReferenceField {
  std::vector<double> field;
  int cells = 0;
};

struct TableCell {
  double h = 0.0, dx = 0.0;
  double err = 0.0;        // the tabulated error (E or final-time, see basis)
  double final_err = 0.0;  // final-time max error when an exact solution exists
  double order = std::numeric_limits<double>::quiet_NaN();
  bool order_in_time = true;  // which mesh halved toward the next cell
  PerfCounters counters;
};

struct TableRow {
  std::vector<TableCell> cells;
};

/// Runs one scheme over a grid sequence and assembles the error column with
/// pairwise observed orders (marked undefined between identical grids).
/// With `reference` set the tabulated error is the final-time max difference
/// against the subsampled reference; otherwise the aggregate against the
/// problem's exact solution.
TableRow table_row(const ProblemSpec& problem, std::span<const GridSpec> grids,
                   const SchemeConfig& scheme, const RunOptions& options = {},
                   const ReferenceField* reference = nullptr);

double final_error_vs_reference(std::span<const double> field, int cells,
                                const ReferenceField& reference);

// ---- CSV emission ----------------------------------------------------------

struct CsvRow {
  std::string problem;
  double alpha = 0.0;
  std::string scheme;
  int interp_order = 1;
  int degree = 0;
  int ntau = 0;
  double h = 0.0, dx = 0.0;
  double err = 0.0, final_err = 0.0;
  double order_t = std::numeric_limits<double>::quiet_NaN();
  double order_s = std::numeric_limits<double>::quiet_NaN();
  PerfCounters counters;
};

std::string csv_header();
std::string csv_line(const CsvRow& row);
CsvRow make_csv_row(const ProblemSpec& problem, const SchemeConfig& scheme,
                    const TableCell& cell);

}  // namespace fracfast
