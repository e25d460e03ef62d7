#include "lqrpg/fixtures.hpp"

#include "lqrpg/errors.hpp"

namespace lqrpg {

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

LqrProblem make(Matrix A, Matrix B, Matrix C, std::string label) {
  const Eigen::Index n = A.rows(), m = B.cols();
  LqrProblem p{std::move(A), std::move(B), std::move(C), Matrix::Identity(n, n), Matrix::Identity(m, m),
               Matrix::Identity(n, n), std::move(label)};
  p.validate();
  return p;
}

std::optional<Gain> first_stabilizing(const LqrProblem& p, std::initializer_list<Gain> candidates) {
  for (const Gain& K : candidates) {
    if (is_stabilizing(p.closed_loop(K))) return K;
  }
  return std::nullopt;
}

double require_alpha(std::optional<double> alpha, const char* name) {
  if (!alpha) throw ValidationError(std::string(name) + " requires the parameter alpha");
  return *alpha;
}

Matrix chain_a(double a33) {
  Matrix A(3, 3);
  A << 0, 1, 0,
       0, 0, 1,
       -1, -1, a33;
  return A;
}

Matrix last_input() {
  Matrix B(3, 1);
  B << 0, 0, 1;
  return B;
}

}  // namespace

std::optional<FixtureName> parse_fixture_name(std::string_view name) {
  if (name == "ex31") return FixtureName::kEx31;
  if (name == "ex32") return FixtureName::kEx32;
  if (name == "ex33") return FixtureName::kEx33;
  if (name == "ex34") return FixtureName::kEx34;
  if (name == "ex35") return FixtureName::kEx35;
  if (name == "toy_scalar") return FixtureName::kToyScalar;
  return std::nullopt;
}

Fixture fixture(std::string_view name, std::optional<double> alpha) {
  const auto parsed = parse_fixture_name(name);
  if (!parsed) throw ValidationError("unknown fixture \"" + std::string(name) + "\"");
  return fixture(*parsed, alpha);
}

Fixture fixture(FixtureName name, std::optional<double> alpha) {
  Fixture fx;
  switch (name) {
    case FixtureName::kEx31: {
      fx.problem = make(scalar(0.0), scalar(0.5), scalar(1.0), "ex31");
      fx.K0 = scalar(3.0);
      fx.facts = {"S = (0, inf)", "f(k) = k + 1/k", "minimum f = 2 at k = 1"};
      break;
    }
    case FixtureName::kEx32: {
      const Matrix I = Matrix::Identity(2, 2);
      fx.problem = make(I, I, I, "ex32");
      fx.K0 = Gain(2.0 * I);
      fx.facts = {"S = {k11 + k22 < 1 + k11 k22 - k12 k21, k11 + k22 > 2}",
                  "S is nonconvex along the cut x = k11 = k12, y = k22 = k21"};
      break;
    }
    case FixtureName::kEx33: {
      Matrix A(3, 3);
      A << 0, 1, 0,
           0, 0, 1,
           0, 0, 0;
      fx.problem = make(A, last_input(), Matrix::Identity(3, 3), "ex33");
      Gain K0(1, 3);
      K0 << 1, 2, 2;
      fx.K0 = K0;
      fx.facts = {"S = {k1 > 0, k3 > 0, k2 k3 > k1}", "S is nonconvex along the cut x = k1, y = k2 = k3"};
      break;
    }
    case FixtureName::kEx34: {
      const double a = require_alpha(alpha, "ex34");
      Matrix C(1, 3);
      C << 5, 2, 1;
      // Closed-loop characteristic polynomial s^3 + (k - a)s^2 + (1 + 2k)s + (1 + 5k).
      fx.problem = make(chain_a(a), last_input(), C, "ex34(alpha=" + std::to_string(a) + ")");
      fx.K0 = first_stabilizing(fx.problem, {scalar(5.0), scalar(0.5), scalar(-0.1)});
      fx.facts = {"S = {k - alpha > 0, (k - alpha)(2k + 1) > 5k + 1 > 0}",
                  "alpha = -1: two components, one local minimum in each",
                  "alpha = -1.4: S = (-0.2, inf) with two local minima"};
      break;
    }
    case FixtureName::kEx35: {
      const double a = require_alpha(alpha, "ex35");
      Matrix C(2, 3);
      C << 1, 1, 0,
           1, -1, 1;
      fx.problem = make(chain_a(-a), last_input(), C, "ex35(alpha=" + std::to_string(a) + ")");
      fx.K0 = first_stabilizing(fx.problem, {Gain::Zero(1, 2), Gain{{-0.3, -0.3}}, Gain{{5.0, 2.0}}});
      fx.facts = {"S = {alpha + k2 > 0, 1 + k1 + k2 > 0, (alpha + k2)(1 + k1 - k2) > 1 + k1 + k2}",
                  "alpha = 1.2: connected, two local minima and a saddle near (1.95, 0.38)",
                  "alpha = 0.9: two components, one local minimum in each"};
      break;
    }
    case FixtureName::kToyScalar: {
      fx.problem = make(scalar(-1.0), scalar(1.0), scalar(1.0), "toy_scalar");
      fx.K0 = scalar(0.0);
      fx.facts = {"X = Y = 1/(2(1 + k))", "K* = sqrt(2) - 1"};
      break;
    }
  }
  return fx;
}

}  // namespace lqrpg
