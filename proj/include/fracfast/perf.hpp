#pragma once

namespace fracfast {

/// Work and storage counters. `flops` counts kernel-weighted multiply-add
/// pairs in history/convolution evaluation plus banded solves; assembly
/// overhead is excluded. `slots` is the peak count of stored reals in the
/// history representation. Wall time is reported raw and gates nothing.
struct PerfCounters {
  unsigned long long flops = 0;
  unsigned long long slots = 0;
  double wall_ms = 0.0;
};

}  // namespace fracfast
