#include <cmath>

#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "sharedvol/ar_model.hpp"
#include "sharedvol/correlogram.hpp"
#include "sharedvol/errors.hpp"

using namespace sharedvol;

TEST_CASE("simulate_ar small cases") {
    const Series e({0.3, -1.2, 0.7});
    CHECK(simulate_ar({{}, 0.0}, e).values() == e.values());
    const auto y = simulate_ar({{0.5}, 0.0}, Series({1.0, 0.0, 0.0}));
    CHECK(y.values() == std::vector<double>{1.0, 0.5, 0.25});
}

TEST_CASE("simulated AR(1) with phi 0.05 has lag-1 acf near 0.05") {
    const auto y = testing::ar_path({0.05}, 3, 300);
    CHECK(std::fabs(sample_acf(y, 1)[0].value - 0.05) < 0.12);
}

TEST_CASE("stationarity") {
    CHECK(is_stationary({0.5}));
    CHECK(is_stationary({0.5, 0.3}));
    CHECK_FALSE(is_stationary({1.0}));
    CHECK_FALSE(is_stationary({0.5, 0.6}));
    CHECK(is_stationary({}));
}

TEST_CASE("identify_ar_order calibration") {
    const int trials = 100;
    int wn = 0, ar1 = 0, ar2 = 0;
    for (int i = 0; i < trials; ++i) {
        wn += identify_ar_order(Series(testing::white_noise(derive_seed(1, i), 10000))) == 0;
        ar1 += identify_ar_order(testing::ar_path({0.8}, derive_seed(2, i), 2000)) == 1;
        ar2 += identify_ar_order(testing::ar_path({0.5, 0.3}, derive_seed(3, i), 2000)) == 2;
    }
    CHECK(wn >= 90);
    CHECK(ar1 >= 90);
    CHECK(ar2 >= 80);
}

TEST_CASE("identify_ar_order respects the cap") {
    for (int i = 0; i < 20; ++i) {
        const auto y = testing::ar_path({0.3, 0.2, 0.15, 0.1, 0.1, 0.08}, derive_seed(4, i), 3000);
        const auto u = identify_ar_order(y, OrderIdentification{20, 5});
        CHECK(u <= 5);
        CHECK(identify_ar_order(y, OrderIdentification{20, 2}) <= 2);
    }
}

TEST_CASE("fit_ar recovers noiseless AR(1)") {
    std::vector<double> y(40);
    y[0] = 1.0;
    for (std::size_t t = 1; t < y.size(); ++t) y[t] = 0.5 * y[t - 1];
    const auto fit = fit_ar(Series(y), 1);
    CHECK(std::fabs(fit.spec.coefficients[0] - 0.5) < 1e-10);
    double rss = 0.0;
    for (double r : fit.residuals) rss += r * r;
    CHECK(rss < 1e-16 * static_cast<double>(y.size()));
}

TEST_CASE("fit_ar matches the normal equations") {
    for (std::size_t u : {1u, 2u, 4u}) {
        const auto y = testing::ar_path({0.4, -0.2, 0.1}, 40 + u, 600);
        const auto fit = fit_ar(y, u);
        const auto beta = oracle::ols_ar(y.values(), u);
        CHECK(std::fabs(fit.spec.intercept - beta[0]) < 1e-9);
        for (std::size_t i = 0; i < u; ++i) CHECK(std::fabs(fit.spec.coefficients[i] - beta[i + 1]) < 1e-9);
        CHECK(fit.residuals.size() == y.size() - u);
        CHECK(fit.coefficient_standard_errors.size() == u);
    }
}

TEST_CASE("refitting fitted values plus residuals is idempotent") {
    const auto y = testing::ar_path({0.6, 0.1}, 77, 400);
    const auto fit = fit_ar(y, 2);
    std::vector<double> rebuilt(y.values().begin(), y.values().begin() + 2);
    for (std::size_t t = 2; t < y.size(); ++t) {
        const double fitted = fit.spec.intercept + fit.spec.coefficients[0] * y[t - 1] + fit.spec.coefficients[1] * y[t - 2];
        rebuilt.push_back(fitted + fit.residuals[t - 2]);
    }
    const auto refit = fit_ar(Series(rebuilt), 2);
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::fabs(refit.spec.coefficients[i] - fit.spec.coefficients[i]) < 1e-10);
}

TEST_CASE("fit_ar consistency and white-noise calibration") {
    const auto fit = fit_ar(testing::ar_path({0.8}, 5, 5000), 1);
    CHECK(std::fabs(fit.spec.coefficients[0] - 0.8) < 0.02);
    int inside = 0;
    const int trials = 200;
    for (int i = 0; i < trials; ++i) {
        const Series y(testing::white_noise(derive_seed(6, i), 400));
        inside += std::fabs(fit_ar(y, 1).spec.coefficients[0]) < significance_limit(400);
    }
    const double rate = static_cast<double>(inside) / trials;
    CHECK(rate > 0.90);
    CHECK(rate < 0.99);
}

TEST_CASE("fit_ar errors") {
    CHECK_THROWS_AS(fit_ar(Series({1.0, 2.0, 3.0, 4.0, 5.0}), 2), InvalidArgument);
    CHECK_THROWS_AS(fit_ar(Series(std::vector<double>(50, 1.5)), 1), FitFailure);
    const auto mean_only = fit_ar(Series({1.0, 2.0, 3.0, 6.0}), 0);
    CHECK(mean_only.order() == 0);
    CHECK(mean_only.spec.intercept == doctest::Approx(3.0));
    CHECK(mean_only.residuals.size() == 4);
}
