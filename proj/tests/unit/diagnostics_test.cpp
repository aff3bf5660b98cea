#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "boxjenkins/autocorrelation.hpp"
#include "boxjenkins/csv.hpp"
#include "boxjenkins/distributions.hpp"
#include "boxjenkins/hypothesis_tests.hpp"
#include "support.hpp"

using namespace boxjenkins;
using Catch::Approx;

namespace {

std::vector<double> fire_dlog(std::size_t n_train = 72) {
  const TimeSeries fire = load_csv(bjtest::fire_csv);
  const auto train = split(fire, SplitSpec{n_train}).first;
  return difference(box_cox(train.values(), BoxCoxLambda{0.0}), 1);
}

}  // namespace

TEST_CASE("acf examples", "[acf]") {
  const AcfResult r = acf(std::vector<double>{1, 2, 3, 4}, 1);
  CHECK(r.at_lag(1) == Approx(0.25).epsilon(1e-15));
  CHECK(r.band == 1.96 / 2.0);
  CHECK(r.n == 4);
  CHECK_THROWS_AS(acf(std::vector<double>{3, 3, 3, 3}, 1), DataError);
  CHECK_THROWS_AS(acf(std::vector<double>{1, 2, 3}, 3), ConfigError);

  const auto w = fire_dlog();
  const AcfResult fire = acf(w, 10);
  CHECK(fire.at_lag(1) < 0.0);
  CHECK(fire.significant(1));
  CHECK(fire.band == 1.96 / std::sqrt(71.0));
}

TEST_CASE("pacf examples", "[acf]") {
  CHECK(pacf(std::vector<double>{1, 2, 3, 4}, 1).at_lag(1) == Approx(0.25).epsilon(1e-15));

  const auto x = bjtest::simulate_arma({0.8}, {}, 500, 2024);
  const AcfResult p = pacf(x, 20);
  CHECK(p.at_lag(1) == Approx(0.8).margin(0.05));
  int inside = 0;
  for (std::size_t k = 2; k <= 20; ++k) inside += p.significant(k) ? 0 : 1;
  CHECK(inside >= 18);  // at least 90% of lags 2..20
}

TEST_CASE("durbin-levinson reports breakdown", "[acf]") {
  CHECK_THROWS_AS(durbin_levinson(std::vector<double>{1.0}), NumericError);
  const auto k = durbin_levinson(std::vector<double>{0.5, 0.25});
  CHECK(k[0] == Approx(0.5));
  CHECK(k[1] == Approx(0.0).margin(1e-15));
}

TEST_CASE("property: correlograms are bounded and pacf(1) = acf(1)", "[acf][property]") {
  for (unsigned seed = 1; seed <= 100; ++seed) {
    const auto x = bjtest::simulate_arma({0.5, -0.3}, {0.4}, 30 + seed, seed);
    const auto a = acf(x, 12);
    const auto p = pacf(x, 12);
    REQUIRE(p.at_lag(1) == a.at_lag(1));
    for (double r : a.coefficients) REQUIRE(std::abs(r) <= 1.0 + 1e-9);
    REQUIRE(a.band == 1.96 / std::sqrt(static_cast<double>(x.size())));
  }
}

TEST_CASE("dickey-fuller p-value interpolation", "[adf]") {
  auto [p_mid, c_mid] = dickey_fuller_p_value(-3.45, 100);
  CHECK(p_mid == Approx(0.05).margin(1e-12));
  CHECK_FALSE(c_mid);
  auto [p_lo, c_lo] = dickey_fuller_p_value(-10.0, 71);
  CHECK(p_lo == 0.01);
  CHECK(c_lo);
  auto [p_hi, c_hi] = dickey_fuller_p_value(1.0, 71);
  CHECK(p_hi == 0.99);
  CHECK(c_hi);
}

TEST_CASE("adf examples", "[adf]") {
  const TestResult fire = adf_test(fire_dlog());
  CHECK(fire.df == 4);
  CHECK(fire.p_value == 0.01);
  CHECK(fire.p_clamped);

  CHECK(adf_test(bjtest::random_walk(200, 7)).p_value > 0.05);
  CHECK(adf_test(bjtest::white_noise(200, 7)).p_value <= 0.01);
  CHECK_THROWS_AS(adf_test(std::vector<double>{1, 2, 3, 4, 5, 6, 7}), DataError);
}

TEST_CASE("property: adf p-value is monotone in the statistic", "[adf][property]") {
  for (double n : {30.0, 71.0, 150.0, 400.0, 2000.0}) {
    double previous = 0.0;
    for (double t = -6.0; t <= 1.5; t += 0.01) {
      const double p = dickey_fuller_p_value(t, n).first;
      REQUIRE(p >= previous);
      previous = p;
    }
  }
}

TEST_CASE("property: adf size and power under simulation", "[adf][property]") {
  int rejected_rw = 0;
  int rejected_wn = 0;
  for (unsigned seed = 1; seed <= 200; ++seed) {
    rejected_rw += adf_test(bjtest::random_walk(200, seed)).p_value < 0.05 ? 1 : 0;
    rejected_wn += adf_test(bjtest::white_noise(200, 1000 + seed)).p_value < 0.05 ? 1 : 0;
  }
  INFO("random walk rejections " << rejected_rw << "/200, white noise rejections " << rejected_wn << "/200");
  CHECK(rejected_rw <= 20);   // size near 5%
  CHECK(rejected_wn >= 190);  // power near 1
}

TEST_CASE("ljung-box examples", "[ljung-box]") {
  const auto x = bjtest::white_noise(50, 3);
  const double r1 = acf(x, 1).at_lag(1);
  const TestResult lb = ljung_box(x, 1);
  CHECK(lb.df == 1);
  CHECK(lb.statistic == Approx(50.0 * 52.0 * r1 * r1 / 49.0).epsilon(1e-12));
  CHECK(dist::chi_squared_upper_tail(50.0 * 52.0 * 0.09 / 49.0, 1) == Approx(0.02886729138454464).epsilon(1e-10));
  CHECK(50.0 * 52.0 * 0.09 / 49.0 == Approx(4.7755).margin(1e-4));

  const TestResult fitted = ljung_box(x, 10, 2);
  CHECK(fitted.df == 8);
  CHECK_THROWS_AS(ljung_box(x, 50), ConfigError);
  CHECK_THROWS_AS(ljung_box(x, 5, 5), ConfigError);
}

TEST_CASE("ljung-box with all autocorrelations zero", "[ljung-box]") {
  // r_1 = r_2 = 0 for this pattern.
  const TestResult lb = ljung_box(std::vector<double>{1, 0, -1, 0, 1, 0, -1, 0}, 1);
  CHECK(lb.statistic == Approx(0.0).margin(1e-15));
  CHECK(lb.p_value == Approx(1.0));
}

TEST_CASE("property: ljung-box is scale invariant", "[ljung-box][property]") {
  for (unsigned seed = 1; seed <= 50; ++seed) {
    const auto e = bjtest::white_noise(80, seed);
    const double q = ljung_box(e, 10).statistic;
    for (double c : {-3.0, 0.001, 250.0}) {
      std::vector<double> scaled(e);
      for (auto& v : scaled) v *= c;
      REQUIRE(ljung_box(scaled, 10).statistic == Approx(q).epsilon(1e-10));
    }
  }
}

TEST_CASE("property: ljung-box size on white noise", "[ljung-box][property]") {
  int rejected = 0;
  for (unsigned seed = 1; seed <= 1000; ++seed) rejected += ljung_box(bjtest::white_noise(100, seed), 10).p_value < 0.05;
  INFO("rejections " << rejected << "/1000");
  CHECK(rejected >= 30);
  CHECK(rejected <= 80);
}

TEST_CASE("shapiro-wilk reference values", "[shapiro]") {
  // Reference values from scipy.stats.shapiro (AS R94).
  const TestResult discrete = shapiro_wilk(std::vector<double>{1, 1, 1, 2});
  CHECK(discrete.statistic == Approx(0.629776264554299).margin(1e-4));
  CHECK(discrete.p_value == Approx(0.0012407259151036264).margin(1e-4));

  const TestResult table4 = shapiro_wilk(std::vector<double>{11, 1, 21, -1, 3, -7, 22, -2, -13, 1, 16, 2});
  CHECK(table4.statistic == Approx(0.9345617878154643).margin(1e-6));
  CHECK(table4.p_value == Approx(0.43097854663862134).margin(1e-6));
  CHECK(std::abs(table4.p_value - 0.3842) <= 0.05);

  const TestResult fifteen =
      shapiro_wilk(std::vector<double>{2.1, 3.4, 1.9, 5.6, 4.4, 3.3, 2.8, 6.1, 3.9, 4.0, 5.2, 2.2, 3.6, 4.8, 3.1});
  CHECK(fifteen.statistic == Approx(0.9669975167395716).margin(1e-6));
  CHECK(fifteen.p_value == Approx(0.8113743381280168).margin(1e-6));

  const TestResult three = shapiro_wilk(std::vector<double>{1, 2, 4});
  CHECK(three.statistic == Approx(0.9642857142857142).margin(1e-6));
  CHECK(three.p_value == Approx(0.6368868450289689).margin(1e-6));

  CHECK(shapiro_wilk(bjtest::white_noise(500, 99)).p_value > 0.05);
  CHECK_THROWS_AS(shapiro_wilk(std::vector<double>{1, 2}), DataError);
  CHECK_THROWS_AS(shapiro_wilk(std::vector<double>{4, 4, 4, 4}), DataError);
}

TEST_CASE("property: shapiro-wilk is affine invariant", "[shapiro][property]") {
  for (unsigned seed = 1; seed <= 50; ++seed) {
    const auto x = bjtest::simulate_arma({}, {}, 5 + seed, seed, 2.0, 0);
    const double w = shapiro_wilk(x).statistic;
    for (auto [a, b] : {std::pair{3.0, 10.0}, std::pair{-0.5, -2.0}, std::pair{1e3, 1e3}}) {
      std::vector<double> y(x);
      for (auto& v : y) v = a * v + b;
      REQUIRE(std::abs(shapiro_wilk(y).statistic - w) < 1e-10);
    }
  }
}
