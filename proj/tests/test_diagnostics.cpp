#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "sharedvol/distributions.hpp"
#include "sharedvol/errors.hpp"
#include "sharedvol/diagnostics.hpp"
#include "sharedvol/garch_model.hpp"

using namespace sharedvol;

namespace {

const GARCHSpec kStudy{0.1, {0.2}, {0.5}};

double rate(int hits, int trials) { return static_cast<double>(hits) / trials; }

}  // namespace

TEST_CASE("ljung_box on an orthogonal series") {
    const auto r = ljung_box(Series({1.0, 0.0, -1.0, 0.0}), 1);
    CHECK(r.statistics[0] == doctest::Approx(0.0));
    CHECK(r.p_values[0] == 1.0);
    CHECK_FALSE(r.reject_null);
}

TEST_CASE("ljung_box hand value") {
    const double q = 100.0 * 102.0 * 0.09 / 99.0;
    CHECK(q == doctest::Approx(9.2727).epsilon(1e-4));
    CHECK(chi_square_sf(q, 1.0) == doctest::Approx(0.0023).epsilon(0.05));
}

TEST_CASE("ljung_box matches the hand formula") {
    const auto y = testing::ar_path({0.2}, 5, 700);
    const auto r = ljung_box(y, 20);
    REQUIRE(r.lags.size() == 20);
    for (std::size_t i = 0; i < r.lags.size(); ++i) {
        const double q = oracle::ljung_box_q(y.values(), r.lags[i]);
        CHECK(std::fabs(r.statistics[i] - q) < 1e-10);
        CHECK(std::fabs(r.p_values[i] - oracle::chi_square_sf(q, static_cast<double>(r.lags[i]))) < 1e-10);
        if (i > 0) CHECK(r.statistics[i] >= r.statistics[i - 1]);
        CHECK(r.p_values[i] >= 0.0);
        CHECK(r.p_values[i] <= 1.0);
    }
    const auto adj = ljung_box(y, 20, 2);
    CHECK(adj.lags.front() == 3);
    CHECK(adj.p_values.back() == doctest::Approx(chi_square_sf(adj.statistics.back(), 18.0)));
}

TEST_CASE("ljung_box size on white noise") {
    int hits = 0;
    const int trials = 400;
    for (int i = 0; i < trials; ++i) hits += ljung_box(Series(testing::white_noise(derive_seed(20, i), 1000)), 20).reject_null;
    CHECK(rate(hits, trials) > 0.02);
    CHECK(rate(hits, trials) < 0.09);
}

TEST_CASE("mcleod_li is ljung_box on squares") {
    const auto y = simulate_garch(kStudy, 400, 21).eta;
    std::vector<double> sq(y);
    for (double& v : sq) v *= v;
    const auto ml = mcleod_li(Series(y), 20);
    const auto lb = ljung_box(Series(sq), 20);
    CHECK(ml.test_name == TestName::mcleod_li);
    CHECK(ml.statistics == lb.statistics);
    CHECK(ml.p_values == lb.p_values);
    int below = 0;
    for (double p : ml.p_values) below += p < 0.05;
    CHECK(ml.rejected_fraction == doctest::Approx(below / 20.0));
    CHECK(ml.reject_null == (ml.rejected_fraction > 0.05));
}

TEST_CASE("mcleod_li rejects constant squares") {
    CHECK_THROWS_AS(mcleod_li(Series(std::vector<double>(100, 2.0)), 20), DegenerateInput);
    std::vector<double> alt(100);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? 1.0 : -1.0;
    CHECK_THROWS_AS(mcleod_li(Series(alt), 20), DegenerateInput);
}

// Each lag is a level-0.05 test. The aggregate rule rejects when more than one
// of the 20 lags is significant, so its size on white noise is above 5%.
TEST_CASE("mcleod_li per-lag size on white noise") {
    const int trials = 2000;
    std::vector<int> per_lag(20, 0);
    int aggregate = 0;
    for (int i = 0; i < trials; ++i) {
        const auto r = mcleod_li(Series(testing::white_noise(derive_seed(22, i), 300)), 20);
        for (std::size_t k = 0; k < 20; ++k) per_lag[k] += r.p_values[k] < 0.05;
        aggregate += r.reject_null;
    }
    for (int h : per_lag) CHECK(std::fabs(rate(h, trials) - 0.05) < 0.04);
    MESSAGE("aggregate white-noise rejection rate: " << rate(aggregate, trials));
    CHECK(rate(aggregate, trials) < 0.20);
}

TEST_CASE("mcleod_li on white noise rarely rejects" * doctest::may_fail()) {
    int quiet = 0;
    const int trials = 1000;
    for (int i = 0; i < trials; ++i) quiet += !mcleod_li(Series(testing::white_noise(derive_seed(23, i), 300)), 20).reject_null;
    MESSAGE("non-rejection rate: " << rate(quiet, trials));
    CHECK(rate(quiet, trials) >= 0.90);
}

TEST_CASE("mcleod_li power on GARCH(1,1) paths" * doctest::may_fail()) {
    int hits = 0;
    const int trials = 500;
    for (int i = 0; i < trials; ++i) hits += mcleod_li(Series(simulate_garch(kStudy, 300, derive_seed(24, i)).eta), 20).reject_null;
    MESSAGE("rejection rate: " << rate(hits, trials));
    CHECK(rate(hits, trials) >= 0.90);
}

TEST_CASE("li_mak degrees of freedom") {
    const Series z(testing::white_noise(25, 500));
    const auto r = li_mak(z, 20, 1, 1);
    CHECK(r.test_name == TestName::li_mak);
    CHECK(r.lags.front() == 3);
    CHECK(r.p_values.back() == doctest::Approx(chi_square_sf(r.statistics.back(), 18.0)));
    CHECK_THROWS_AS(li_mak(z, 2, 1, 1), InvalidArgument);
}

TEST_CASE("li_mak calibration and power") {
    const int trials = 100;
    int fitted_pass = 0, raw_reject = 0, wn_reject = 0;
    for (int i = 0; i < trials; ++i) {
        const auto sim = simulate_garch(kStudy, 1000, derive_seed(26, i));
        const auto fit = fit_garch(Series(sim.eta), 1, 1);
        fitted_pass += !li_mak(Series(fit.standardized_residuals), 20, 1, 1).reject_null;
        raw_reject += li_mak(Series(simulate_garch(kStudy, 1000, derive_seed(27, i)).eta), 20, 1, 1).reject_null;
    }
    // Nothing was fitted to raw white noise, so no degrees of freedom are removed.
    const int wn_trials = 1000;
    for (int i = 0; i < wn_trials; ++i) wn_reject += li_mak(Series(testing::white_noise(derive_seed(28, i), 500)), 20, 0, 0).reject_null;
    MESSAGE("fitted pass " << rate(fitted_pass, trials) << ", raw reject " << rate(raw_reject, trials)
                           << ", white-noise reject " << rate(wn_reject, wn_trials));
    CHECK(rate(fitted_pass, trials) >= 0.85);
    CHECK(rate(raw_reject, trials) >= 0.85);
    CHECK(std::fabs(rate(wn_reject, wn_trials) - 0.05) <= 0.03);
}

TEST_CASE("qq_normal on an exact quantile grid") {
    const std::size_t T = 200;
    std::vector<double> grid(T);
    for (std::size_t i = 0; i < T; ++i) grid[i] = normal_quantile((static_cast<double>(i) + 0.5) / T);
    std::shuffle(grid.begin(), grid.end(), std::mt19937_64(3));
    const auto qq = qq_normal(Series(grid));
    for (std::size_t i = 0; i < T; ++i) CHECK(std::fabs(qq.sample_quantiles[i] - qq.theoretical_quantiles[i]) < 1e-6);
    CHECK(qq.coverage() == 1.0);
}

TEST_CASE("qq_normal is affine invariant") {
    const auto x = testing::white_noise(29, 300);
    std::vector<double> y(x);
    for (double& v : y) v = 4.0 + 2.5 * v;
    const auto a = qq_normal(Series(x));
    const auto b = qq_normal(Series(y));
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::fabs(a.sample_quantiles[i] - b.sample_quantiles[i]) < 1e-9);
    CHECK_THROWS_AS(qq_normal(Series(testing::white_noise(1, 5))), InvalidArgument);
}

TEST_CASE("qq envelope coverage for normal and heavy-tailed samples") {
    const int trials = 100;
    int normal_ok = 0, heavy_exit = 0;
    for (int i = 0; i < trials; ++i) {
        normal_ok += qq_normal(Series(testing::white_noise(derive_seed(30, i), 1000))).coverage() >= 0.95;
        std::mt19937_64 rng(derive_seed(31, i));
        std::student_t_distribution<double> t3(3.0);
        std::vector<double> x(1000);
        for (double& v : x) v = t3(rng);
        const auto qq = qq_normal(Series(x));
        const auto outside = [&](std::size_t j) {
            return qq.sample_quantiles[j] < qq.envelope_lower[j] || qq.sample_quantiles[j] > qq.envelope_upper[j];
        };
        bool tail = false;
        for (std::size_t j = 0; j < 10; ++j) tail |= outside(j) || outside(999 - j);
        heavy_exit += tail;
    }
    CHECK(rate(normal_ok, trials) >= 0.90);
    CHECK(rate(heavy_exit, trials) >= 0.90);
}
