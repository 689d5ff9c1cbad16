#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "relgate/evidence.hpp"

using namespace relgate;

namespace {

// Test-only oracle: adaptive Simpson, split at the truncation knee so both
// pieces are smooth.
double simpson(const BettingCalibrator& cal, double a, double b) {
  auto f = [&cal](double u) { return cal.evaluate(u); };
  struct Rec {
    static double go(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double tol,
                     int depth) {
      double m = 0.5 * (a + b);
      double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      double flm = f(lm), frm = f(rm);
      double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
      return go(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
             go(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
    }
  };
  double fa = f(a == 0.0 ? 1e-300 : a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec::go(f, a == 0.0 ? 1e-300 : a, b, fa, fm, fb, whole, 1e-10, 40);
}

double quadrature_unit_interval(const BettingCalibrator& cal) {
  double knee = std::pow(cal.trunc(), -1.0 / cal.eta());
  if (knee >= 1.0) return cal.norm();  // f constant at norm
  // clipped region is exactly norm * trunc * knee
  return cal.norm() * cal.trunc() * knee + simpson(cal, knee, 1.0);
}

}  // namespace

TEST_SUITE("evidence") {
  TEST_CASE("normalization constant, closed form") {
    BettingCalibrator main_cal(0.7, 10.0);
    CHECK(main_cal.norm() == doctest::Approx(0.405916).epsilon(1e-5));
    CHECK(std::log(main_cal.evaluate(1.0)) == doctest::Approx(-0.90161).epsilon(1e-4));

    BettingCalibrator flat(0.5, 1.0);
    CHECK(flat.norm() == doctest::Approx(1.0));
    CHECK(flat.evaluate(0.3) == doctest::Approx(1.0));
    CHECK(flat.evaluate(1.0) == doctest::Approx(1.0));

    BettingCalibrator hand(0.5, 4.0);
    CHECK(hand.norm() == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
  }

  TEST_CASE("quadrature of f over [0,1] is 1") {
    for (double eta : {0.3, 0.7}) {
      for (double trunc : {1.0, 10.0}) {
        BettingCalibrator cal(eta, trunc);
        CHECK(quadrature_unit_interval(cal) == doctest::Approx(1.0).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("calibrator evaluation at the worked ranks") {
    BettingCalibrator cal(0.7, 10.0);
    CHECK(cal.evaluate(51.0 / 171.0) == doctest::Approx(0.94674).epsilon(1e-5));
    CHECK(cal.evaluate(25.0 / 171.0) == doctest::Approx(1.55936).epsilon(1e-4));
    CHECK(cal.evaluate(1.0) == doctest::Approx(cal.norm()));
    CHECK_THROWS_AS(cal.evaluate(0.0), std::invalid_argument);
    CHECK_THROWS_AS(cal.evaluate(1.5), std::invalid_argument);
    CHECK_THROWS_AS(cal.evaluate(-0.1), std::invalid_argument);
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(BettingCalibrator(0.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(BettingCalibrator(1.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(BettingCalibrator(-0.5, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(BettingCalibrator(0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(BettingCalibrator(0.5, INFINITY), std::invalid_argument);
  }

  TEST_CASE("f is non-increasing") {
    BettingCalibrator cal(0.7, 10.0);
    double prev = cal.evaluate(1e-6);
    for (double u = 1e-3; u <= 1.0; u += 1e-3) {
      double cur = cal.evaluate(u);
      CHECK(cur <= prev + 1e-15);
      prev = cur;
    }
  }

  TEST_CASE("log and linear evaluation agree") {
    BettingCalibrator cal(0.7, 10.0);
    for (double u : {1e-6, 0.01, 0.146, 0.5, 1.0})
      CHECK(cal.log_evaluate(u) == doctest::Approx(std::log(cal.evaluate(u))).epsilon(1e-12));
  }

  TEST_CASE("wealth updates") {
    WealthState start;
    CHECK(start.log_wealth == 0.0);
    CHECK(start.step == 0);

    WealthState one = wealth_update(start, 0.947);
    CHECK(one.step == 1);
    CHECK(std::exp(one.log_wealth) == doctest::Approx(0.947));

    WealthState same = wealth_update(start, 1.0);
    CHECK(same.log_wealth == doctest::Approx(0.0));
    CHECK(same.step == 1);

    // at the p-floor of a 170 pool the bet hits the truncation
    BettingCalibrator cal(0.7, 10.0);
    WealthState floor_hit = wealth_update(start, cal.evaluate(1.0 / 171.0));
    CHECK(std::exp(floor_hit.log_wealth) == doctest::Approx(4.059).epsilon(1e-3));

    CHECK_THROWS_AS(wealth_update(start, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(wealth_update(start, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(wealth_update(start, INFINITY), std::invalid_argument);

    WealthState released{0.0, 3, 2};
    CHECK(*wealth_update(released, 2.0).released_at == 2);
  }

  TEST_CASE("ville threshold") {
    CHECK(ville_threshold(0.10) == doctest::Approx(10.0));
    CHECK(ville_threshold(0.5) == doctest::Approx(2.0));
    CHECK(ville_threshold(0.05) == doctest::Approx(20.0));
    CHECK_THROWS_AS(ville_threshold(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ville_threshold(1.0), std::invalid_argument);
  }

  TEST_CASE("wrapper reproduces the delayed-release trace") {
    auto pool = testutil::table_pool();
    BettingCalibrator cal(0.7, 10.0);
    auto outcome = run_wrapper(testutil::delayed_stream(), pool, cal, 0.1, 10);
    REQUIRE(outcome.released());
    CHECK(*outcome.release_step == 7);
    CHECK(outcome.wealth_trace[0] == doctest::Approx(0.947).epsilon(5e-3));
    CHECK(outcome.wealth_trace[6] == doctest::Approx(13.617).epsilon(5e-3));
    CHECK(outcome.wealth_trace[9] == doctest::Approx(51.64).epsilon(6e-3));
    CHECK(outcome.p_trace[0].value() == doctest::Approx(0.298).epsilon(2e-3));
    CHECK(outcome.p_trace[1].value() == doctest::Approx(0.146).epsilon(2e-3));
  }

  TEST_CASE("wrapper abstains under persistent deception") {
    auto pool = testutil::table_pool();
    BettingCalibrator cal(0.7, 10.0);
    auto outcome = run_wrapper(testutil::deceptive_stream(), pool, cal, 0.1, 10);
    CHECK_FALSE(outcome.released());
    CHECK(outcome.wealth_trace[9] == doctest::Approx(5.469).epsilon(5e-3));
    for (const auto& p : outcome.p_trace)
      CHECK(p.value() == doctest::Approx(37.0 / 171.0));
  }

  TEST_CASE("a floor-level p releases immediately at alpha 0.25") {
    auto pool = testutil::table_pool();
    BettingCalibrator cal(0.7, 10.0);
    auto stream = testutil::make_trajectory("floor", {2.0});
    auto outcome = run_wrapper(stream, pool, cal, 0.25, 10);
    REQUIRE(outcome.released());
    CHECK(*outcome.release_step == 1);
    CHECK(outcome.wealth_trace[0] == doctest::Approx(4.059).epsilon(1e-3));
  }

  TEST_CASE("traces continue past the release step") {
    auto pool = testutil::table_pool();
    BettingCalibrator cal(0.7, 10.0);
    auto outcome = run_wrapper(testutil::delayed_stream(), pool, cal, 0.1, 10);
    CHECK(outcome.wealth_trace.size() == 10);
    CHECK(outcome.p_trace.size() == 10);
    for (int t = 0; t < *outcome.release_step - 1; ++t)
      CHECK(outcome.wealth_trace[t] < 10.0);
    CHECK(outcome.wealth_trace[*outcome.release_step - 1] >= 10.0);
  }

  TEST_CASE("streams shorter than the horizon abstain at stream end") {
    auto pool = testutil::table_pool();
    BettingCalibrator cal(0.7, 10.0);
    auto stream = testutil::make_trajectory("short", {1.0, 1.0, 1.0});
    auto outcome = run_wrapper(stream, pool, cal, 0.1, 10);
    CHECK_FALSE(outcome.released());
    CHECK(outcome.wealth_trace.size() == 3);
  }

  TEST_CASE("t_max truncates long streams") {
    auto pool = testutil::table_pool();
    BettingCalibrator cal(0.7, 10.0);
    auto outcome = run_wrapper(testutil::delayed_stream(), pool, cal, 0.1, 5);
    CHECK_FALSE(outcome.released());
    CHECK(outcome.wealth_trace.size() == 5);
  }

  TEST_CASE("wrapper validation") {
    auto pool = testutil::table_pool();
    BettingCalibrator cal(0.7, 10.0);
    Trajectory empty;
    CHECK_THROWS_AS(run_wrapper(empty, pool, cal, 0.1, 10), std::invalid_argument);
    auto stream = testutil::make_trajectory("x", {0.5});
    CHECK_THROWS_AS(run_wrapper(stream, pool, cal, 0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(run_wrapper(stream, pool, cal, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(run_wrapper(stream, pool, cal, 0.1, 0), std::invalid_argument);
    stream.steps[0].score = std::nan("");
    CHECK_THROWS_AS(run_wrapper(stream, pool, cal, 0.1, 10), std::invalid_argument);
  }

  TEST_CASE("release is monotone in alpha") {
    auto pool = testutil::table_pool();
    BettingCalibrator cal(0.7, 10.0);
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> levels{0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.8};
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> scores(10);
      for (auto& s : scores) s = unif(gen) * 1.1;
      auto stream = testutil::make_trajectory("mc", scores);
      std::optional<int> prev_step;
      bool prev_released = false;
      for (double alpha : levels) {
        auto outcome = run_wrapper(stream, pool, cal, alpha, 10);
        if (prev_released) {
          REQUIRE(outcome.released());
          CHECK(*outcome.release_step <= *prev_step);
        }
        prev_released = outcome.released();
        prev_step = outcome.release_step;
      }
    }
  }

  TEST_CASE("log-domain wealth equals the direct product") {
    auto pool = testutil::table_pool();
    BettingCalibrator cal(0.7, 10.0);
    std::mt19937_64 gen(33);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> scores(100);
      for (auto& s : scores) s = unif(gen) * 1.1;
      auto stream = testutil::make_trajectory("mc", scores);
      auto outcome = run_wrapper(stream, pool, cal, 0.001, 100);
      double product = 1.0;
      for (std::size_t t = 0; t < scores.size(); ++t) {
        product *= cal.evaluate(outcome.p_trace[t].value());
        CHECK(outcome.wealth_trace[t] ==
              doctest::Approx(product).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("null supermartingale: mean wealth stays near or below 1") {
    // i.i.d. exactly-uniform p-values are the boundary super-uniform case.
    BettingCalibrator cal(0.7, 10.0);
    std::mt19937_64 gen(55);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int reps = 4000, horizon = 50;
    std::vector<double> sum(horizon, 0.0), sum_sq(horizon, 0.0);
    for (int r = 0; r < reps; ++r) {
      double wealth = 1.0;
      for (int t = 0; t < horizon; ++t) {
        double u = 1.0 - unif(gen);
        wealth *= cal.evaluate(u);
        sum[t] += wealth;
        sum_sq[t] += wealth * wealth;
      }
    }
    for (int t = 0; t < horizon; ++t) {
      double mean = sum[t] / reps;
      double var = std::max(0.0, sum_sq[t] / reps - mean * mean);
      double stderr_ = std::sqrt(var / reps);
      CHECK(mean <= 1.0 + 3.0 * stderr_);
    }
  }

  TEST_CASE("per-step calibrator schedule") {
    auto pool = testutil::table_pool();
    std::vector<BettingCalibrator> schedule{BettingCalibrator(0.3, 10.0),
                                            BettingCalibrator(0.7, 10.0)};
    auto stream = testutil::make_trajectory("sched", {1.0, 1.0, 1.0});
    auto outcome = run_wrapper(stream, pool,
                               std::span<const BettingCalibrator>(schedule),
                               0.001, 10);
    double p = 25.0 / 171.0;
    CHECK(outcome.wealth_trace[0] ==
          doctest::Approx(schedule[0].evaluate(p)).epsilon(1e-12));
    CHECK(outcome.wealth_trace[1] ==
          doctest::Approx(schedule[0].evaluate(p) * schedule[1].evaluate(p))
              .epsilon(1e-12));
    // later steps reuse the last calibrator
    CHECK(outcome.wealth_trace[2] ==
          doctest::Approx(schedule[0].evaluate(p) * schedule[1].evaluate(p) *
                          schedule[1].evaluate(p))
              .epsilon(1e-12));
  }
}
