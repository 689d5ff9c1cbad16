#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "relgate/baselines.hpp"
#include "relgate/calibrate.hpp"

using namespace relgate;

TEST_SUITE("baselines") {
  TEST_CASE("one-step rule sits just above the attainable p at alpha 0.1") {
    auto pool = testutil::table_pool();
    auto outcome = first_p_rule(testutil::delayed_stream(), pool, 0.10);
    CHECK_FALSE(outcome.released());
    // the p sequence starts (0.298, 0.146, ...)
    CHECK(outcome.p_trace[0].value() == doctest::Approx(51.0 / 171.0));
    CHECK(outcome.p_trace[1].value() == doctest::Approx(25.0 / 171.0));
  }

  TEST_CASE("relaxing the level to 0.2 releases at the first perfect score") {
    auto pool = testutil::table_pool();
    auto outcome = first_p_rule(testutil::delayed_stream(), pool, 0.20);
    REQUIRE(outcome.released());
    CHECK(*outcome.release_step == 2);
  }

  TEST_CASE("any sub-unit p releases immediately at a lax level") {
    auto pool = testutil::table_pool();
    auto stream = testutil::make_trajectory("lax", {0.9});
    auto outcome = first_p_rule(stream, pool, 0.999);
    REQUIRE(outcome.released());
    CHECK(*outcome.release_step == 1);
    // p = 1 can never sit below a level strictly inside (0, 1)
    auto hopeless = testutil::make_trajectory("p1", {0.0});
    CHECK_FALSE(first_p_rule(hopeless, pool, 0.999).released());
  }

  TEST_CASE("one-step rule equals a brute-force scan") {
    auto pool = testutil::table_pool();
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
      std::size_t len = 1 + static_cast<std::size_t>(unif(gen) * 19);
      std::vector<double> scores(len);
      for (auto& s : scores) s = unif(gen) * 1.1;
      auto stream = testutil::make_trajectory("mc", scores);
      double alpha = 0.01 + 0.97 * unif(gen);
      auto outcome = first_p_rule(stream, pool, alpha);

      std::optional<int> expected;
      for (std::size_t t = 0; t < len; ++t) {
        if (tail_p_value(pool, scores[t]).leq(alpha)) {
          expected = static_cast<int>(t) + 1;
          break;
        }
      }
      CHECK(outcome.release_step == expected);
      CHECK(outcome.released() == expected.has_value());
    }
  }

  TEST_CASE("entropy threshold is the bank mean") {
    std::vector<double> bank{1.0, 2.0, 3.0};
    CHECK(entropy_threshold_from_bank(bank) == doctest::Approx(2.0));
    std::vector<double> single{0.7};
    CHECK(entropy_threshold_from_bank(single) == doctest::Approx(0.7));
    std::vector<double> none;
    CHECK_THROWS_AS(entropy_threshold_from_bank(none), std::invalid_argument);

    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> unif(0.0, 4.0);
    std::vector<double> draws(1000);
    double sum = 0.0;
    for (auto& h : draws) {
      h = unif(gen);
      sum += h;
    }
    CHECK(entropy_threshold_from_bank(draws) ==
          doctest::Approx(sum / 1000.0).epsilon(1e-12));
  }

  TEST_CASE("entropy rule releases at the first crossing, inclusive") {
    auto low_first = testutil::make_trajectory("e1", {0.9, 0.9}, {},
                                               {0.5, 0.9});
    auto outcome = entropy_rule(low_first, 0.6);
    REQUIRE(outcome.released());
    CHECK(*outcome.release_step == 1);

    auto never = testutil::make_trajectory("e2", {0.9, 0.9}, {}, {0.8, 0.9});
    CHECK_FALSE(entropy_rule(never, 0.6).released());

    auto inclusive = testutil::make_trajectory("e3", {0.9, 0.9, 0.9}, {},
                                               {0.9, 0.6, 0.3});
    auto crossing = entropy_rule(inclusive, 0.6);
    REQUIRE(crossing.released());
    CHECK(*crossing.release_step == 2);
  }

  TEST_CASE("entropy rule requires the field everywhere") {
    auto stream = testutil::make_trajectory("e4", {0.9, 0.9}, {}, {0.5, 0.9});
    stream.steps[1].entropy.reset();
    CHECK_THROWS_AS(entropy_rule(stream, 0.6), std::invalid_argument);
  }

  TEST_CASE("entropy release step is monotone in the threshold") {
    std::mt19937_64 gen(29);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::size_t len = 1 + static_cast<std::size_t>(unif(gen) * 9);
      std::vector<double> scores(len, 0.5), entropies(len);
      for (auto& h : entropies) h = unif(gen);
      auto stream = testutil::make_trajectory("mc", scores, {}, entropies);
      double h1 = unif(gen), h2 = unif(gen);
      if (h1 > h2) std::swap(h1, h2);
      auto tight = entropy_rule(stream, h1);
      auto loose = entropy_rule(stream, h2);
      if (tight.released()) {
        REQUIRE(loose.released());
        CHECK(*loose.release_step <= *tight.release_step);
      }
    }
  }

  TEST_CASE("mean token entropy") {
    std::vector<std::vector<double>> uniform2{{0.5, 0.5}};
    CHECK(mean_token_entropy(uniform2) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    std::vector<std::vector<double>> one_hot{{1.0, 0.0, 0.0}};
    CHECK(mean_token_entropy(one_hot) == doctest::Approx(0.0));

    std::vector<std::vector<double>> mixed{{0.25, 0.25, 0.25, 0.25},
                                           {0.0, 1.0}};
    CHECK(mean_token_entropy(mixed) ==
          doctest::Approx(std::log(4.0) / 2.0).epsilon(1e-12));

    std::vector<std::vector<double>> none;
    CHECK_THROWS_AS(mean_token_entropy(none), std::invalid_argument);
    std::vector<std::vector<double>> empty_pos(1);
    CHECK_THROWS_AS(mean_token_entropy(empty_pos), std::invalid_argument);
    std::vector<std::vector<double>> negative{{1.2, -0.2}};
    CHECK_THROWS_AS(mean_token_entropy(negative), std::invalid_argument);
    std::vector<std::vector<double>> bad_sum{{0.6, 0.5}};
    CHECK_THROWS_AS(mean_token_entropy(bad_sum), std::invalid_argument);

    // tiny renormalization within tolerance is accepted
    std::vector<std::vector<double>> near{{0.5000001, 0.4999996}};
    CHECK(mean_token_entropy(near) == doctest::Approx(std::log(2.0)).epsilon(1e-6));
  }

  TEST_CASE("stability rule trips on a one-test score drop") {
    auto stream = testutil::make_trajectory("s1", {1.0, 0.967});
    auto outcome = stability_rule(stream, 30);
    REQUIRE(outcome.released());
    CHECK(*outcome.release_step == 2);
  }

  TEST_CASE("stability needs both the level and the smoothness") {
    auto high = testutil::make_trajectory("s2", {0.85, 0.85, 0.85});
    auto outcome = stability_rule(high, 30);
    REQUIRE(outcome.released());
    CHECK(*outcome.release_step == 2);

    auto low = testutil::make_trajectory("s3", {0.7, 0.7, 0.7});
    CHECK_FALSE(stability_rule(low, 30).released());

    auto jumpy = testutil::make_trajectory("s4", {0.5, 0.9, 0.5, 0.9});
    CHECK_FALSE(stability_rule(jumpy, 30).released());
  }

  TEST_CASE("stability never releases at step one") {
    auto single = testutil::make_trajectory("s5", {1.0});
    CHECK_FALSE(stability_rule(single, 30).released());
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> scores(5);
      for (auto& s : scores) s = unif(gen);
      auto outcome = stability_rule(testutil::make_trajectory("mc", scores), 10);
      if (outcome.released()) CHECK(*outcome.release_step >= 2);
    }
  }

  TEST_CASE("rules are deterministic") {
    auto pool = testutil::table_pool();
    auto stream = testutil::oscillating_stream();
    auto a = first_p_rule(stream, pool, 0.2);
    auto b = first_p_rule(stream, pool, 0.2);
    CHECK(a.release_step == b.release_step);
    auto c = stability_rule(stream, 30);
    auto d = stability_rule(stream, 30);
    CHECK(c.release_step == d.release_step);
  }

  TEST_CASE("baseline validation") {
    auto pool = testutil::table_pool();
    Trajectory empty;
    CHECK_THROWS_AS(first_p_rule(empty, pool, 0.1), std::invalid_argument);
    auto stream = testutil::make_trajectory("v", {0.5});
    CHECK_THROWS_AS(first_p_rule(stream, pool, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(stability_rule(stream, 0), std::invalid_argument);
  }
}
