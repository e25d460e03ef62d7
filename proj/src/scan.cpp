#include "lqrpg/scan.hpp"

#include <sstream>

#include "lqrpg/cost.hpp"
#include "lqrpg/errors.hpp"
#include "lqrpg/io.hpp"

namespace lqrpg {

namespace {

std::pair<Eigen::Index, Eigen::Index> parse_entry(const std::string& tok) {
  if (tok.size() < 3 || tok[0] != 'k') throw ValidationError("bad scan entry \"" + tok + "\"");
  const std::string digits = tok.substr(1);
  try {
    if (auto us = digits.find('_'); us != std::string::npos) {
      return {std::stol(digits.substr(0, us)) - 1, std::stol(digits.substr(us + 1)) - 1};
    }
    if (digits.size() != 2) throw ValidationError("bad scan entry \"" + tok + "\"");
    return {digits[0] - '1', digits[1] - '1'};
  } catch (const std::logic_error&) {
    throw ValidationError("bad scan entry \"" + tok + "\"");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

double ScanAxis::value(int i) const {
  if (count == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

Gain LandscapeScan::gain_at(int ix, int iy) const {
  Gain K = spec.base;
  for (const auto& [r, c] : spec.axes[0].entries) K(r, c) = spec.axes[0].value(ix);
  if (spec.axes.size() > 1) {
    for (const auto& [r, c] : spec.axes[1].entries) K(r, c) = spec.axes[1].value(iy);
  }
  return K;
}

ScanAxis parse_scan_axis(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4) throw ValidationError("scan axis must look like k11+k12:lo:hi:count");
  ScanAxis axis;
  axis.name = parts[0];
  for (const auto& tok : split(parts[0], '+')) axis.entries.push_back(parse_entry(tok));
  try {
    axis.lo = std::stod(parts[1]);
    axis.hi = std::stod(parts[2]);
    axis.count = std::stoi(parts[3]);
  } catch (const std::logic_error&) {
    throw ValidationError("bad scan range in \"" + text + "\"");
  }
  return axis;
}

void validate_scan(const LqrProblem& problem, const ScanSpec& spec) {
  if (spec.axes.empty() || spec.axes.size() > 2) throw ValidationError("scan needs one or two axes");
  validate_gain(problem, spec.base);
  for (const auto& axis : spec.axes) {
    if (axis.entries.empty()) throw ValidationError("scan axis has no gain entries");
    if (axis.count < 1) throw ValidationError("scan axis needs at least one point");
    for (const auto& [r, c] : axis.entries) {
      if (r < 0 || c < 0 || r >= problem.m() || c >= problem.r()) {
        throw ValidationError("scan entry (" + std::to_string(r + 1) + "," + std::to_string(c + 1) +
                              ") is outside the " + std::to_string(problem.m()) + "x" +
                              std::to_string(problem.r()) + " gain");
      }
    }
  }
}

LandscapeScan landscape_scan_serial(const LqrProblem& problem, const ScanSpec& spec) {
  validate_scan(problem, spec);
  LandscapeScan scan{spec, {}};
  const int nx = scan.nx(), ny = scan.ny();
  scan.values.resize(static_cast<size_t>(nx) * static_cast<size_t>(ny));
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      scan.values[static_cast<size_t>(iy) * nx + ix] = try_cost(problem, scan.gain_at(ix, iy));
    }
  }
  return scan;
}

LandscapeScan landscape_scan(const LqrProblem& problem, const ScanSpec& spec) {
  validate_scan(problem, spec);
  LandscapeScan scan{spec, {}};
  const int nx = scan.nx(), ny = scan.ny();
  const long total = static_cast<long>(nx) * ny;
  scan.values.resize(static_cast<size_t>(total));
#pragma omp parallel for schedule(dynamic, 16)
  for (long idx = 0; idx < total; ++idx) {
    const int ix = static_cast<int>(idx % nx), iy = static_cast<int>(idx / nx);
    scan.values[static_cast<size_t>(idx)] = try_cost(problem, scan.gain_at(ix, iy));
  }
  return scan;
}

std::string scan_to_csv(const LandscapeScan& scan) {
  std::ostringstream os;
  const bool two_d = scan.spec.axes.size() > 1;
  os << (two_d ? "x,y,stabilizing,f\n" : "x,stabilizing,f\n");
  for (int iy = 0; iy < scan.ny(); ++iy) {
    for (int ix = 0; ix < scan.nx(); ++ix) {
      const auto& v = scan.values[static_cast<size_t>(iy) * scan.nx() + ix];
      os << format_number(scan.spec.axes[0].value(ix));
      if (two_d) os << ',' << format_number(scan.spec.axes[1].value(iy));
      os << ',' << (v ? 1 : 0) << ',';
      if (v) os << format_number(*v);
      os << '\n';
    }
  }
  return os.str();
}

std::vector<std::pair<double, double>> stabilizing_intervals(const LandscapeScan& scan) {
  if (scan.spec.axes.size() != 1) throw ValidationError("stabilizing_intervals needs a 1-D scan");
  std::vector<std::pair<double, double>> out;
  const auto& axis = scan.spec.axes[0];
  int start = -1;
  for (int i = 0; i <= scan.nx(); ++i) {
    const bool in = i < scan.nx() && scan.values[static_cast<size_t>(i)].has_value();
    if (in && start < 0) start = i;
    if (!in && start >= 0) {
      out.emplace_back(axis.value(start), axis.value(i - 1));
      start = -1;
    }
  }
  return out;
}

std::vector<double> grid_local_minima(const LandscapeScan& scan) {
  if (scan.spec.axes.size() != 1) throw ValidationError("grid_local_minima needs a 1-D scan");
  std::vector<double> out;
  const auto& v = scan.values;
  for (int i = 1; i + 1 < scan.nx(); ++i) {
    const auto &l = v[static_cast<size_t>(i - 1)], &c = v[static_cast<size_t>(i)], &r = v[static_cast<size_t>(i + 1)];
    if (l && c && r && *c < *l && *c < *r) out.push_back(scan.spec.axes[0].value(i));
  }
  return out;
}

}  // namespace lqrpg
