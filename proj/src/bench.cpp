#include "fracfast/bench.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fracfast {

ErrorRecord error_metrics(std::span<const std::vector<double>> numeric,
                          std::span<const std::vector<double>> reference, double h) {
  if (numeric.size() != reference.size()) {
    throw std::invalid_argument("error_metrics: step count mismatch");
  }
  ErrorRecord record;
  double sum = 0.0;
  for (std::size_t j = 0; j < numeric.size(); ++j) {
    if (numeric[j].size() != reference[j].size()) {
      throw std::invalid_argument("error_metrics: field shape mismatch");
    }
    double err = 0.0;
    for (std::size_t i = 0; i < numeric[j].size(); ++i) {
      err = std::max(err, std::abs(numeric[j][i] - reference[j][i]));
    }
    record.step_inf.push_back(err);
    sum += err * err;
  }
  record.aggregate = std::sqrt(h * sum);
  record.final_inf = record.step_inf.empty() ? 0.0 : record.step_inf.back();
  return record;
}

double observed_order(double e_coarse, double e_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0)) {
    throw std::invalid_argument("observed_order: errors must be positive");
  }
  return std::log2(e_coarse / e_fine);
}

namespace {

constexpr double kPi = 3.14159265358979323846;

double poly_x(double x) {  // x^4 (pi - x)^4
  const double a = x * x * (kPi - x) * (kPi - x);
  return a * a;
}

// The bracket multiplying t^(3+alpha) e^-x in the printed source term.
double source_bracket(double x) {
  return x * x * (56.0 - 16.0 * x + x * x) -
         2.0 * kPi * x * (28.0 - 12.0 * x + x * x) +
         kPi * kPi * (12.0 - 8.0 * x + x * x);
}

std::vector<SeparableTerm> example31_forcing(double alpha) {
  const double g4a = std::tgamma(4.0 + alpha);
  std::vector<SeparableTerm> terms;
  terms.push_back({[g4a](double x) { return g4a * poly_x(x) * std::exp(-x) / 6.0; },
                   3.0});
  terms.push_back({[](double x) {
                     const double q = x * x * (kPi - x) * (kPi - x);
                     return -q * std::exp(-x) * source_bracket(x);
                   },
                   3.0 + alpha});
  terms.push_back({[](double x) {
                     const double q = x * x * (kPi - x) * (kPi - x);
                     return -4.0 * q *
                            (3.0 * kPi * kPi - 14.0 * kPi * x + 14.0 * x * x);
                   },
                   0.0});
  return terms;
}

}  // namespace

ProblemSpec example31(double alpha) {
  ProblemSpec p;
  p.id = "example31";
  p.kind = ProblemKind::linear_forced;
  p.alpha = alpha;
  p.xa = 0.0;
  p.xb = kPi;
  p.exact = [alpha](double x, double t) {
    return poly_x(x) * (std::exp(-x) * std::pow(t, 3.0 + alpha) + 1.0);
  };
  p.initial = [](double x) { return poly_x(x); };
  p.boundary = [p_exact = p.exact](double x, double t) { return p_exact(x, t); };
  p.forcing = example31_forcing(alpha);
  return p;
}

ProblemSpec example41(double alpha) {
  ProblemSpec p = example31(alpha);
  p.id = "example41";
  p.kind = ProblemKind::nonlinear_forced;
  p.reaction = [](double u) { return 0.01 * u * (1.0 - u); };
  // g = f - 0.01 u_exact (1 - u_exact), expanded into powers of t so the
  // space profiles stay precomputable: with A = X e^-x and q = 3 + alpha,
  //   -0.01 (A t^q + X)(1 - A t^q - X)
  //     = A(-0.01 + 0.02 X) t^q + 0.01 A^2 t^(2q) + 0.01 X(X - 1).
  const double q = 3.0 + alpha;
  p.forcing.push_back({[](double x) {
                         const double X = poly_x(x);
                         return poly_x(x) * std::exp(-x) * (-0.01 + 0.02 * X);
                       },
                       q});
  p.forcing.push_back({[](double x) {
                         const double A = poly_x(x) * std::exp(-x);
                         return 0.01 * A * A;
                       },
                       2.0 * q});
  p.forcing.push_back({[](double x) {
                         const double X = poly_x(x);
                         return 0.01 * X * (X - 1.0);
                       },
                       0.0});
  return p;
}

ProblemSpec fisher() {
  ProblemSpec p;
  p.id = "fisher";
  p.kind = ProblemKind::fisher_abc;
  p.alpha = 0.25;
  p.xa = -6.0;
  p.xb = 6.0;
  p.initial = [](double x) { return std::sqrt(10.0 / kPi) * std::exp(-10.0 * x * x); };
  p.reaction = [](double u) { return -u * (1.0 - u); };
  p.s0 = 3.0;
  return p;
}

ProblemSpec huxley() {
  ProblemSpec p;
  p.id = "huxley";
  p.kind = ProblemKind::huxley_abc;
  p.alpha = 0.5;
  p.xa = -8.0;
  p.xb = 8.0;
  p.initial = [](double x) {
    return std::exp(-10.0 * (x - 0.5) * (x - 0.5)) +
           std::exp(-10.0 * (x + 0.5) * (x + 0.5));
  };
  p.reaction = [](double u) { return -0.1 * u * (1.0 - u) * (u - 0.001); };
  p.s0 = 3.0;
  return p;
}

ProblemSpec manufactured_linear(double alpha) {
  ProblemSpec p;
  p.id = "manufactured";
  p.kind = ProblemKind::linear_forced;
  p.alpha = alpha;
  p.xa = 0.0;
  p.xb = 1.0;
  p.exact = [](double x, double t) { return (1.0 + t) * (1.0 + x + x * x); };
  p.initial = [p_exact = p.exact](double x) { return p_exact(x, 0.0); };
  p.boundary = [p_exact = p.exact](double x, double t) { return p_exact(x, t); };
  const double c = 1.0 / std::tgamma(2.0 - alpha);
  p.forcing.push_back({[c](double x) { return c * (1.0 + x + x * x); }, 1.0 - alpha});
  p.forcing.push_back({[](double) { return -2.0; }, 0.0});
  p.forcing.push_back({[](double) { return -2.0; }, 1.0});
  return p;
}

double final_error_vs_reference(std::span<const double> field, int cells,
                                const ReferenceField& reference) {
  if (reference.cells % cells != 0) {
    throw std::invalid_argument("reference mesh does not nest the compared mesh");
  }
  const int stride = reference.cells / cells;
  double err = 0.0;
  for (int i = 0; i <= cells; ++i) {
    err = std::max(err, std::abs(field[i] -
                                 reference.field[static_cast<std::size_t>(i) * stride]));
  }
  return err;
}

TableRow table_row(const ProblemSpec& problem, std::span<const GridSpec> grids,
                   const SchemeConfig& scheme, const RunOptions& options,
                   const ReferenceField* reference) {
  if (grids.size() < 2) {
    throw std::invalid_argument("table_row: need at least two grids");
  }
  TableRow row;
  for (const GridSpec& grid : grids) {
    const RunRecord record = run(problem, grid, scheme, options);
    TableCell cell;
    cell.h = grid.h;
    cell.dx = grid.dx();
    cell.counters = record.counters;
    if (reference != nullptr) {
      cell.err = final_error_vs_reference(record.final_field, grid.cells, *reference);
      cell.final_err = cell.err;
    } else {
      cell.err = record.aggregate_err;
      cell.final_err = record.final_err;
    }
    row.cells.push_back(cell);
  }
  for (std::size_t i = 0; i + 1 < row.cells.size(); ++i) {
    const GridSpec& coarse = grids[i];
    const GridSpec& fine = grids[i + 1];
    const bool halved_t = std::abs(coarse.h / fine.h - 2.0) < 1e-12;
    const bool halved_s = std::abs(coarse.dx() / fine.dx() - 2.0) < 1e-12;
    if ((halved_t || halved_s) && row.cells[i].err > 0.0 && row.cells[i + 1].err > 0.0) {
      row.cells[i].order = observed_order(row.cells[i].err, row.cells[i + 1].err);
      row.cells[i].order_in_time = halved_t;
    }
  }
  return row;
}

std::string csv_header() {
  return "problem,alpha,scheme,J,K,Ntau,h,dx,E,final_err,order_t,order_s,flops,slots,"
         "wall_ms";
}

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "-";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string csv_line(const CsvRow& row) {
  std::string out;
  out += row.problem;
  out += ',';
  out += format_double(row.alpha);
  out += ',';
  out += row.scheme;
  char buf[96];
  std::snprintf(buf, sizeof(buf), ",%d,%d,%d,", row.interp_order, row.degree, row.ntau);
  out += buf;
  out += format_double(row.h);
  out += ',';
  out += format_double(row.dx);
  out += ',';
  out += format_double(row.err);
  out += ',';
  out += format_double(row.final_err);
  out += ',';
  out += format_double(row.order_t);
  out += ',';
  out += format_double(row.order_s);
  std::snprintf(buf, sizeof(buf), ",%llu,%llu,", row.counters.flops,
                row.counters.slots);
  out += buf;
  out += format_double(row.counters.wall_ms);
  return out;
}

CsvRow make_csv_row(const ProblemSpec& problem, const SchemeConfig& scheme,
                    const TableCell& cell) {
  CsvRow row;
  row.problem = problem.id;
  row.alpha = problem.alpha;
  row.scheme = evaluator_name(scheme.kind);
  row.interp_order = scheme.interp_order;
  row.degree = scheme.kind == EvaluatorKind::faom_pk ? scheme.degree : 0;
  row.ntau = (scheme.kind == EvaluatorKind::faom ||
              scheme.kind == EvaluatorKind::faom_pk)
                 ? scheme.ntau
                 : 0;
  row.h = cell.h;
  row.dx = cell.dx;
  row.err = cell.err;
  row.final_err = cell.final_err;
  if (!std::isnan(cell.order)) {
    (cell.order_in_time ? row.order_t : row.order_s) = cell.order;
  }
  row.counters = cell.counters;
  return row;
}

}  // namespace fracfast
