#pragma once

#include <vector>

namespace fracfast::published {

/// One scheme column of a published results table: the error cells per grid
/// plus the printed observed orders between consecutive grids. NaN entries
/// are excluded from comparisons (suspected misprints, or orders the table
/// leaves blank).
struct Column {
  const char* scheme;  // "cutoff", "faom", "l1", "faom-p4", "l1-2", "faom-p9"
  std::vector<double> err;
  std::vector<double> order;
};

struct Block {
  double alpha;
  std::vector<Column> columns;
};

using Table = std::vector<Block>;

/// Linear problem, first-order interpolation, central stencil;
/// h = 1/10 .. 1/160 at dx = pi/20000.
const Table& table1();

/// Linear problem, quadratic interpolation, compact stencil; same grids.
const Table& table2();

/// Nonlinear forced problem in time; h = 1/10 .. 1/160 at dx = pi/5000.
const Table& table41();

/// Nonlinear forced problem in space; dx = pi/80 .. pi/640 at h = 2^-14.
const Table& table42();

/// Fisher equation in time; h = 2^-8 .. 2^-11 at dx = 3*2^-10.
const Table& fisher_time();

/// Fisher equation in space; dx = 3/2^5 .. 3/2^8 at h = 2^-14.
const Table& fisher_space();

/// Huxley equation in time; h = 2^-5 .. 2^-8 at dx = 2^-6.
const Table& huxley_time();

/// Huxley equation in space; dx = 2^-2 .. 2^-5 at h = 2^-14.
const Table& huxley_space();

}  // namespace fracfast::published
