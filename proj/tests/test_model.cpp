#include <gtest/gtest.h>

#include <cmath>

#include "lqrpg/bounds.hpp"
#include "lqrpg/cost.hpp"
#include "lqrpg/errors.hpp"
#include "lqrpg/fixtures.hpp"
#include "lqrpg/multistart.hpp"
#include "lqrpg/random_problem.hpp"
#include "lqrpg/riccati.hpp"
#include "support.hpp"

using namespace lqrpg;
using testing_support::Rng;

namespace {

LqrProblem toy() { return fixture(FixtureName::kToyScalar).problem; }
LqrProblem ex31() { return fixture(FixtureName::kEx31).problem; }
Gain scalar(double k) { return Gain::Constant(1, 1, k); }

std::function<double(const Matrix&)> cost_of(const LqrProblem& p) {
  return [p](const Matrix& K) { return *try_cost(p, K); };
}

}  // namespace

// ---- problem validation ----

TEST(Problem, RejectsBadData) {
  LqrProblem p = toy();
  p.Q(0, 0) = 0.0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = toy();
  p.B.setZero();
  EXPECT_THROW(p.validate(), ValidationError);
  p = toy();
  p.Sigma = Matrix::Identity(2, 2);
  try {
    p.validate();
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("Sigma"), std::string::npos);
  }
  LqrProblem q = fixture(FixtureName::kEx35, 1.2).problem;
  q.C.row(1) = q.C.row(0);
  EXPECT_THROW(q.validate(), ValidationError);
}

// ---- evaluate ----

TEST(Evaluate, ScalarExampleMatchesClosedForm) {
  const CostEval at = evaluate(ex31(), scalar(2.0));
  EXPECT_NEAR(at.f, 2.5, 1e-14);
  const double h = 1e-6;
  const double fd = (*try_cost(ex31(), scalar(2 + h)) - *try_cost(ex31(), scalar(2 - h))) / (2 * h);
  EXPECT_NEAR(at.grad(0, 0), 0.75, 1e-14);
  EXPECT_NEAR(at.grad(0, 0), fd, 1e-8);
}

TEST(Evaluate, ToyScalarClosedForms) {
  const CostEval at = evaluate(toy(), scalar(0.0));
  EXPECT_NEAR(at.X(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(at.Y(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(at.M(0, 0), -0.5, 1e-15);
  EXPECT_NEAR(at.f, 0.5, 1e-15);
  EXPECT_NEAR(at.grad(0, 0), -0.5, 1e-15);
}

TEST(Evaluate, StoredPartsAreConsistent) {
  Rng rng(21);
  for (int t = 0; t < 20; ++t) {
    const int n = rng.integer(1, 6);
    const auto inst = testing_support::random_instance(rng, n, rng.integer(1, 3), rng.integer(1, n));
    const auto& p = inst.problem;
    const CostEval at = evaluate(p, inst.K);
    EXPECT_NEAR(at.f, (at.X * p.Sigma).trace(), 1e-12 * at.f);
    EXPECT_LE((at.grad - 2 * at.M * at.Y * p.C.transpose()).norm(), 1e-12 * (1 + at.grad.norm()));
    EXPECT_LE((at.M - (p.R * inst.K * p.C - p.B.transpose() * at.X)).norm(), 1e-12 * (1 + at.M.norm()));
    EXPECT_TRUE(is_spd(at.X));
    EXPECT_TRUE(is_spd(at.Y));
    EXPECT_NEAR(at.f, testing_support::oracle_cost(p, inst.K), 1e-10 * at.f);
  }
}

TEST(Evaluate, RejectsNonStabilizingGain) {
  try {
    evaluate(ex31(), scalar(-1.0));
    FAIL();
  } catch (const StabilityError& e) {
    EXPECT_NEAR(e.spectral_abscissa(), 0.5, 1e-15);
  }
  EXPECT_FALSE(try_evaluate(ex31(), scalar(0.0)).has_value());
  EXPECT_FALSE(try_cost(ex31(), scalar(0.0)).has_value());
}

TEST(Evaluate, SaddleRegionOfTwoOutputExample) {
  // The quoted saddle (1.95, 0.38) is rounded to two decimals; the gradient
  // there is O(1), but a stationary point lies within 0.05 of it.
  const LqrProblem p = fixture(FixtureName::kEx35, 1.2).problem;
  Gain K(1, 2);
  K << 1.95, 0.38;
  const StationaryPoint sp = refine_stationary(p, K);
  EXPECT_LE((sp.K - K).norm(), 0.05);
  EXPECT_LE(sp.grad_norm, 1e-2);
  EXPECT_EQ(sp.signature.kind, StationaryKind::kSaddle);
}

// ---- gradient and Hessian against finite differences ----

TEST(Derivatives, GradientMatchesFiniteDifferences) {
  Rng rng(31);
  for (int t = 0; t < 30; ++t) {
    const int n = rng.integer(1, 8), m = rng.integer(1, 3), r = rng.integer(1, n);
    const auto inst = testing_support::random_instance(rng, n, m, r);
    const CostEval at = evaluate(inst.problem, inst.K);
    const Matrix fd = testing_support::fd_gradient(cost_of(inst.problem), inst.K);
    for (Eigen::Index i = 0; i < fd.size(); ++i) {
      EXPECT_NEAR(at.grad(i), fd(i), 1e-5 * std::max(1.0, std::abs(fd(i))));
    }
  }
}

TEST(Derivatives, HessianFormMatchesSecondDifference) {
  Rng rng(32);
  for (int t = 0; t < 30; ++t) {
    const int n = rng.integer(1, 8), m = rng.integer(1, 3), r = rng.integer(1, n);
    const auto inst = testing_support::random_instance(rng, n, m, r);
    const Matrix E = rng.unit_direction(m, r);
    const double form = hessian_form(inst.problem, inst.K, E);
    const double fd = testing_support::fd_second(cost_of(inst.problem), inst.K, E, 1e-3);
    EXPECT_NEAR(form, fd, 1e-4 * std::max(1.0, std::abs(fd)));
  }
}

TEST(Derivatives, HessianFormScalarExamples) {
  EXPECT_NEAR(hessian_form(ex31(), scalar(1.0), Matrix::Ones(1, 1)), 2.0, 1e-13);
  EXPECT_NEAR(hessian_form(ex31(), scalar(2.0), Matrix::Ones(1, 1)), 0.25, 1e-14);
  const auto inst = [] {
    Rng rng(33);
    return testing_support::random_instance(rng, 4, 2, 3);
  }();
  EXPECT_EQ(hessian_form(inst.problem, inst.K, Matrix::Zero(2, 3)), 0.0);
}

TEST(Derivatives, HessianFormIsQuadratic) {
  Rng rng(34);
  const auto inst = testing_support::random_instance(rng, 5, 2, 5);
  const Matrix E = rng.gaussian(2, 5);
  const double h1 = hessian_form(inst.problem, inst.K, E);
  EXPECT_NEAR(hessian_form(inst.problem, inst.K, 3.0 * E), 9.0 * h1, 1e-10 * std::abs(h1));
  EXPECT_NEAR(hessian_form(inst.problem, inst.K, -E), h1, 1e-12 * std::abs(h1));
}

TEST(Derivatives, XPrimeSolvesItsEquation) {
  Rng rng(35);
  const auto inst = testing_support::random_instance(rng, 5, 2, 3);
  const auto& p = inst.problem;
  const CostEval at = evaluate(p, inst.K);
  const Matrix E = rng.gaussian(2, 3);
  const Matrix Xp = hessian_x_prime(p, at, E);
  const Matrix AK = p.closed_loop(inst.K);
  const Matrix W = at.M.transpose() * E * p.C;
  const Matrix res = AK.transpose() * Xp + Xp * AK + W + W.transpose();
  EXPECT_LE(res.norm(), 1e-9 * (AK.norm() * Xp.norm() + 2 * W.norm()));
}

// ---- bounds ----

TEST(Bounds, CoercivityScalarExample) {
  const auto cb = coercivity_bounds(ex31(), scalar(2.0));
  EXPECT_NEAR(cb.sigma_bound, 0.5, 1e-15);
  EXPECT_NEAR(cb.norm_bound, 2.0, 1e-15);
  EXPECT_EQ(coercivity_bounds(toy(), scalar(0.0)).norm_bound, 0.0);
}

TEST(Bounds, SmoothnessConstantExamples) {
  const auto s31 = smoothness_constant(ex31(), 2.0);
  EXPECT_NEAR(s31.xi, 2 * (1 + std::sqrt(2.0)), 1e-13);
  EXPECT_NEAR(s31.L, 4 * (1 + 0.5 * s31.xi), 1e-12);
  EXPECT_NEAR(s31.L, 13.6569, 1e-4);
  const auto stoy = smoothness_constant(toy(), 0.5);
  EXPECT_NEAR(stoy.xi, 0.5 * (0.5 + std::sqrt(1.25)), 1e-14);
  EXPECT_NEAR(stoy.L, 1.8090, 1e-4);
  EXPECT_GT(smoothness_constant(ex31(), 4.0).L, s31.L);
}

TEST(Bounds, LplConstant) {
  EXPECT_NEAR(lpl_constant(ex31(), 2.0, 2.0), 0.25, 1e-15);
  EXPECT_LT(lpl_constant(ex31(), 3.0, 2.0), 0.25);
  const double mu = lpl_constant(ex31(), 2.5, 2.0);
  EXPECT_GE(0.5 * 0.75 * 0.75, mu * (2.5 - 2.0));
  EXPECT_THROW(lpl_constant(fixture(FixtureName::kEx34, -1.0).problem, 30.0, 20.0), UnsupportedForOutputFeedback);
  EXPECT_THROW(lpl_constant(ex31(), 1.0, 2.0), ValidationError);
}

TEST(Bounds, YTraceBoundExamples) {
  EXPECT_NEAR(y_trace_bound(toy(), scalar(0.0)), 0.5, 1e-15);
  EXPECT_NEAR(y_trace_bound(ex31(), scalar(1.0)), 1.0, 1e-14);
  EXPECT_NEAR(evaluate(ex31(), scalar(1.0)).Y(0, 0), 1.0, 1e-14);
  Rng rng(41);
  for (int t = 0; t < 20; ++t) {
    const auto inst = testing_support::random_instance(rng, 4, 2, 4);
    const CostEval at = evaluate(inst.problem, inst.K);
    EXPECT_LE(lambda_max(at.Y), y_trace_bound(inst.problem, at) * (1 + 1e-12));
  }
}

TEST(Bounds, KNormBoundExamples) {
  EXPECT_NEAR(k_norm_bound(ex31(), 2.5), 2.5, 1e-15);
  EXPECT_GT(k_norm_bound(ex31(), 5.0), k_norm_bound(ex31(), 2.5));
  EXPECT_NEAR(k_norm_bound(toy(), 0.5), 2.0, 1e-15);
}

TEST(Bounds, ReportOnlyCarriesMuForStateFeedback) {
  const BoundsReport slqr = bounds_report(ex31(), scalar(2.0), 2.0);
  ASSERT_TRUE(slqr.mu.has_value());
  EXPECT_NEAR(slqr.f0, 2.5, 1e-14);
  EXPECT_NEAR(slqr.lower_bound_norm, 2.0, 1e-14);
  const BoundsReport olqr = bounds_report(fixture(FixtureName::kEx34, -1.0).problem, scalar(5.0), 10.0);
  EXPECT_FALSE(olqr.mu.has_value());
  EXPECT_GE(olqr.L, 0.0);
}

// ---- Riccati ----

TEST(Riccati, ScalarExamples) {
  const auto s31 = riccati_optimum(ex31(), scalar(3.0));
  EXPECT_NEAR(s31.X(0, 0), 2.0, 1e-12);
  EXPECT_NEAR(s31.K(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(evaluate(ex31(), s31.K).f, 2.0, 1e-12);
  const auto stoy = riccati_optimum(toy());
  EXPECT_NEAR(stoy.X(0, 0), std::sqrt(2.0) - 1, 1e-14);
  EXPECT_NEAR(stoy.K(0, 0), std::sqrt(2.0) - 1, 1e-14);
}

TEST(Riccati, RandomBenchmarkInstanceIsOptimal) {
  const GeneratedProblem gen = generate_random_problem(20, 5, 3);
  const auto sol = riccati_optimum(gen.problem, gen.K0);
  const CostEval at = evaluate(gen.problem, sol.K);
  EXPECT_LE(sol.relative_residual, 1e-9);
  EXPECT_LE(at.grad_norm(), 1e-7 * (1 + evaluate(gen.problem, gen.K0).grad_norm()));
  Rng rng(51);
  int checked = 0;
  while (checked < 100) {
    const Gain K = sol.K + rng.uniform(0.001, 0.3) * rng.unit_direction(5, 20);
    auto f = try_cost(gen.problem, K);
    if (!f) continue;
    EXPECT_LE(at.f, *f);
    ++checked;
  }
}

TEST(Riccati, RequiresStateFeedback) {
  EXPECT_THROW(riccati_optimum(fixture(FixtureName::kEx34, -1.0).problem, scalar(5.0)), UnsupportedForOutputFeedback);
  EXPECT_THROW(riccati_optimum(ex31(), scalar(-1.0)), StabilityError);
}

TEST(Riccati, LocallyStronglyConvexAtOptimum) {
  Rng rng(52);
  for (int t = 0; t < 5; ++t) {
    const int n = rng.integer(2, 6), m = rng.integer(1, 3);
    const auto inst = testing_support::random_instance(rng, n, m, n);
    const auto sol = riccati_optimum(inst.problem, inst.K);
    for (int d = 0; d < 50; ++d) EXPECT_GT(hessian_form(inst.problem, sol.K, rng.unit_direction(m, n)), 0.0);
  }
}
