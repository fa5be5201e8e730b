#include <cmath>

#include <doctest.h>

#include "helpers.hpp"
#include "oracles.hpp"
#include "sharedvol/errors.hpp"
#include "sharedvol/garch_model.hpp"

using namespace sharedvol;

namespace {

const GARCHSpec kStudy{0.1, {0.2}, {0.5}};

bool alpha_significant(const GARCHFit& fit) {
    const auto rows = fit.coefficient_table();
    return rows[1].p_value && *rows[1].p_value < 0.05;
}

}  // namespace

TEST_CASE("spec validation and helpers") {
    CHECK_NOTHROW(validate(kStudy));
    CHECK_THROWS_AS(validate({0.0, {0.2}, {0.5}}), InvalidArgument);
    CHECK_THROWS_AS(validate({0.1, {-0.1}, {0.5}}), InvalidArgument);
    CHECK_THROWS_AS(validate({0.1, {0.6}, {0.5}}), InvalidArgument);
    CHECK_THROWS_AS(validate({0.1, {}, {0.5}}), InvalidArgument);
    CHECK(kStudy.unconditional_variance() == doctest::Approx(1.0 / 3.0));
    const GARCHSpec s{0.3, {0.1, 0.05}, {0.6}};
    const auto flat = s.flatten();
    CHECK(flat == std::vector<double>{0.3, 0.1, 0.05, 0.6});
    const auto back = GARCHSpec::unflatten(flat, 1, 2);
    CHECK(back.alpha == s.alpha);
    CHECK(back.beta == s.beta);
}

TEST_CASE("aic values") {
    CHECK(aic(100.0, 3) == -194.0);
    CHECK(aic(0.0, 3) == 6.0);
    CHECK(aic(-10.0, 5) == 30.0);
}

TEST_CASE("one recursion step") {
    const std::vector<double> data{1.0, 0.0};
    const auto s2 = conditional_variances(kStudy, data, 1.0);
    CHECK(s2[0] == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("single-observation log-likelihood") {
    const std::vector<double> one{1.0};
    CHECK(gaussian_log_likelihood(std::vector<double>{0.0}, one) == doctest::Approx(-0.9189385332).epsilon(1e-10));
    CHECK(gaussian_log_likelihood(std::vector<double>{1.0}, one) == doctest::Approx(-1.4189385332).epsilon(1e-10));
}

TEST_CASE("log-likelihood matches the direct-summation oracle") {
    const std::vector<GARCHSpec> specs{kStudy, {0.05, {0.1}, {0.85}}, {0.2, {0.1, 0.1}, {0.3, 0.2}}, {0.4, {0.3}, {}}};
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto sim = simulate_garch(kStudy, 1500, 100 + i);
        const Series data(sim.eta);
        const double got = garch_log_likelihood(specs[i], data);
        const double want = oracle::garch_loglik(specs[i].omega, specs[i].alpha, specs[i].beta, sim.eta, variance(data.view()));
        CHECK(std::fabs(got - want) < 1e-10);
    }
}

TEST_CASE("conditional variances stay positive") {
    const auto sim = simulate_garch({0.01, {0.15, 0.05}, {0.7}}, 2000, 8);
    for (double v : conditional_variances({0.01, {0.15, 0.05}, {0.7}}, sim.eta, 1.0)) CHECK(v > 0.0);
}

TEST_CASE("simulate_garch degenerate and unconditional variance") {
    const auto flat = simulate_garch({1.0, {0.0}, {0.0}}, 500, 3);
    for (double s : flat.sigma) CHECK(s == 1.0);
    const auto sim = simulate_garch(kStudy, 100000, 4);
    CHECK(std::fabs(variance(sim.eta) - 1.0 / 3.0) < 0.02);
    for (std::size_t t = 0; t < sim.eta.size(); t += 997) CHECK(sim.eta[t] == sim.sigma[t] * sim.epsilon[t]);
    const auto again = simulate_garch(kStudy, 300, 4);
    CHECK(again.eta == simulate_garch(kStudy, 300, 4).eta);
}

TEST_CASE("log-likelihood peaks near the truth") {
    int wins = 0;
    const int trials = 40;
    for (int i = 0; i < trials; ++i) {
        const Series data(simulate_garch(kStudy, 5000, derive_seed(10, i)).eta);
        const double at_truth = garch_log_likelihood(kStudy, data);
        bool best = true;
        for (double d : {-0.1, 0.1}) {
            best &= at_truth > garch_log_likelihood({0.1, {0.2 + d}, {0.5}}, data);
            best &= at_truth > garch_log_likelihood({0.1, {0.2}, {0.5 + d}}, data);
        }
        wins += best;
    }
    CHECK(wins >= 38);
}

TEST_CASE("fit_garch recovers the study parameters on a long path") {
    const Series data(simulate_garch(kStudy, 20000, 12).eta);
    const auto fit = fit_garch(data, 1, 1);
    CHECK(fit.converged);
    CHECK(std::fabs(fit.spec.omega - 0.1) < 0.05);
    CHECK(std::fabs(fit.spec.alpha[0] - 0.2) < 0.05);
    CHECK(std::fabs(fit.spec.beta[0] - 0.5) < 0.05);
    CHECK(fit.aic == doctest::Approx(aic(fit.log_likelihood, 3)));
    for (std::size_t t = 0; t < data.size(); ++t) {
        const double rebuilt = fit.standardized_residuals[t] * std::sqrt(fit.conditional_variances[t]);
        CHECK(std::fabs(rebuilt - data[t]) <= 1e-12 * std::max(1.0, std::fabs(data[t])));
    }
}

TEST_CASE("fit_garch on white noise finds no ARCH effect") {
    int quiet = 0;
    const int trials = 30;
    for (int i = 0; i < trials; ++i) {
        const Series data(testing::white_noise(derive_seed(13, i), 500));
        quiet += !alpha_significant(fit_garch(data, 1, 1));
    }
    CHECK(quiet >= 24);
}

TEST_CASE("refit on standardized residuals leaves no ARCH") {
    const Series data(simulate_garch(kStudy, 3000, 14).eta);
    const auto fit = fit_garch(data, 1, 1);
    const auto refit = fit_garch(Series(fit.standardized_residuals), 1, 1);
    CHECK_FALSE(alpha_significant(refit));
}

TEST_CASE("fit_garch is scale consistent") {
    const auto eta = simulate_garch(kStudy, 3000, 15).eta;
    std::vector<double> scaled(eta);
    const double c = 3.0;
    for (double& v : scaled) v *= c;
    const auto a = fit_garch(Series(eta), 1, 1);
    const auto b = fit_garch(Series(scaled), 1, 1);
    CHECK(std::fabs(b.spec.omega / (c * c) - a.spec.omega) < 1e-3);
    CHECK(std::fabs(b.spec.alpha[0] - a.spec.alpha[0]) < 1e-3);
    CHECK(std::fabs(b.spec.beta[0] - a.spec.beta[0]) < 1e-3);
}

TEST_CASE("fit_garch argument checks") {
    CHECK_THROWS_AS(fit_garch(Series(testing::white_noise(1, 40)), 1, 1), InvalidArgument);
    CHECK_THROWS_AS(fit_garch(Series(testing::white_noise(1, 400)), 3, 1), InvalidArgument);
    CHECK_THROWS_AS(fit_garch(Series(testing::white_noise(1, 400)), 1, 0), InvalidArgument);
}

TEST_CASE("order selection agrees with an exhaustive refit") {
    const Series data(simulate_garch({0.05, {0.15}, {0.75}}, 800, 16).eta);
    const GarchFitOptions options;
    const auto sel = identify_garch_order(data, default_garch_candidates(), options);
    double best = INFINITY;
    OrderPair arg{0, 0};
    for (const auto& [p, q] : default_garch_candidates()) {
        const double a = fit_garch(data, p, q, options).aic;
        CHECK(sel.aic_of(p, q).value() == doctest::Approx(a).epsilon(1e-12));
        if (a < best) best = a, arg = {p, q};
    }
    CHECK(sel.p == arg.first);
    CHECK(sel.q == arg.second);
    CHECK(sel.selected().aic == best);
    const auto again = identify_garch_order(data, default_garch_candidates(), options);
    CHECK(again.selected().aic == sel.selected().aic);
}

TEST_CASE("joint AR-GARCH fit improves on the two-stage start") {
    const auto sim = simulate_garch(kStudy, 1000, 17);
    const auto y = simulate_ar({{0.6}, 0.0}, Series(sim.eta));
    const auto fit = fit_ar_garch(y, 1, 1, 1);
    CHECK(std::fabs(fit.ar_coefficients[0] - 0.6) < 0.1);
    CHECK(fit.garch.persistence() < 1.0);
}
