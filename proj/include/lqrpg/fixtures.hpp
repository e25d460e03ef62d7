#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lqrpg/problem.hpp"

namespace lqrpg {

enum class FixtureName { kEx31, kEx32, kEx33, kEx34, kEx35, kToyScalar };

/// Small textbook instances with known structure.
struct Fixture {
  LqrProblem problem;
  /// A stabilizing starting gain, when one is known for the parameter value.
  std::optional<Gain> K0;
  /// Known analytic facts about the instance, for reports.
  std::vector<std::string> facts;
};

/// ex31: scalar, A = 0, B = 1/2, Q = R = Sigma = 1; f(k) = k + 1/k.
/// ex32: A = B = C = I_2.
/// ex33: triple integrator with state feedback.
/// ex34(alpha): third-order plant with scalar output y = (5 2 1) x.
/// ex35(alpha): same plant with two outputs.
/// toy_scalar: A = -1, B = C = Q = R = Sigma = 1.
///
/// Throws ValidationError when alpha is missing for ex34 / ex35.
Fixture fixture(FixtureName name, std::optional<double> alpha = std::nullopt);

/// Accepts "ex31", "ex32", "ex33", "ex34", "ex35", "toy_scalar".
Fixture fixture(std::string_view name, std::optional<double> alpha = std::nullopt);

std::optional<FixtureName> parse_fixture_name(std::string_view name);

}  // namespace lqrpg
