#pragma once

#include <vector>

namespace huescan {

/// Exact minimum-cost transport between two discrete distributions over a
/// dense cost matrix (row-major, supply.size() x demand.size()). Solved by
/// successive shortest augmenting paths with node potentials; exact up to
/// float rounding for the small instances palettes produce (k <= ~8 a side).
/// Supplies and demands must be non-negative with equal totals (normalized
/// internally to tolerate 1e-9 drift).
double solve_transport(const std::vector<double>& supply, const std::vector<double>& demand,
                       const std::vector<double>& cost);

} // namespace huescan
