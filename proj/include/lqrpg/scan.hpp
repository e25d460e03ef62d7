#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lqrpg/problem.hpp"

namespace lqrpg {

/// One scan coordinate. Every listed gain entry is set to the coordinate
/// value, so an axis can describe a cut such as x = k11 = k12.
struct ScanAxis {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> entries;  // 0-based (row, col)
  double lo = 0.0;
  double hi = 1.0;
  int count = 2;
  std::string name;

  double value(int i) const;
};

struct ScanSpec {
  Gain base;                  // entries not on any axis keep these values
  std::vector<ScanAxis> axes; // one or two
};

struct LandscapeScan {
  ScanSpec spec;
  /// Row-major over (y, x): index = iy * nx + ix. nullopt marks a gain
  /// outside the stabilizing set.
  std::vector<std::optional<double>> values;

  int nx() const { return spec.axes.at(0).count; }
  int ny() const { return spec.axes.size() > 1 ? spec.axes[1].count : 1; }
  Gain gain_at(int ix, int iy) const;
};

/// Parses "k11+k12:-2:10:121" (1-based entry indices; "k1_12" for indices
/// above 9). Throws ValidationError.
ScanAxis parse_scan_axis(const std::string& text);

/// Checks axis count (1 or 2), entry bounds against the gain shape, and
/// grid sizes. Throws ValidationError.
void validate_scan(const LqrProblem& problem, const ScanSpec& spec);

/// Evaluates f over the grid, parallel over grid points with OpenMP.
LandscapeScan landscape_scan(const LqrProblem& problem, const ScanSpec& spec);

/// Single-threaded reference for landscape_scan; identical output.
LandscapeScan landscape_scan_serial(const LqrProblem& problem, const ScanSpec& spec);

/// CSV: x[,y],stabilizing,f with f left empty for non-stabilizing points.
std::string scan_to_csv(const LandscapeScan& scan);

/// For 1-D scans: maximal runs of consecutive stabilizing grid points, as
/// (first, last) coordinate pairs.
std::vector<std::pair<double, double>> stabilizing_intervals(const LandscapeScan& scan);

/// For 1-D scans: coordinates of strict discrete local minima among
/// stabilizing points (both neighbors stabilizing and larger).
std::vector<double> grid_local_minima(const LandscapeScan& scan);

}  // namespace lqrpg
