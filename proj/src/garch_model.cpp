#include "sharedvol/garch_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "sharedvol/distributions.hpp"
#include "sharedvol/errors.hpp"
#include "sharedvol/random.hpp"

namespace sharedvol {

namespace {

constexpr double kPersistenceMargin = 1e-6;
constexpr double kMinVariance = 1e-300;

}  // namespace

double GARCHSpec::persistence() const noexcept {
    double s = 0.0;
    for (double a : alpha) s += a;
    for (double b : beta) s += b;
    return s;
}

double GARCHSpec::unconditional_variance() const noexcept { return omega / (1.0 - persistence()); }

std::vector<double> GARCHSpec::flatten() const {
    std::vector<double> out{omega};
    out.insert(out.end(), alpha.begin(), alpha.end());
    out.insert(out.end(), beta.begin(), beta.end());
    return out;
}

GARCHSpec GARCHSpec::unflatten(std::span<const double> params, std::size_t p, std::size_t q) {
    if (params.size() != 1 + p + q) throw InvalidArgument("parameter vector has wrong length");
    GARCHSpec spec;
    spec.omega = params[0];
    spec.alpha.assign(params.begin() + 1, params.begin() + 1 + static_cast<std::ptrdiff_t>(q));
    spec.beta.assign(params.begin() + 1 + static_cast<std::ptrdiff_t>(q), params.end());
    return spec;
}

void validate(const GARCHSpec& spec) {
    if (spec.q() < 1) throw InvalidArgument("GARCH needs at least one ARCH term (q >= 1)");
    if (!(spec.omega > 0.0) || !std::isfinite(spec.omega)) throw InvalidArgument("GARCH omega must be > 0");
    for (double a : spec.alpha) {
        if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidArgument("GARCH alpha must be >= 0");
    }
    for (double b : spec.beta) {
        if (!(b >= 0.0) || !std::isfinite(b)) throw InvalidArgument("GARCH beta must be >= 0");
    }
    if (!(spec.persistence() < 1.0)) throw InvalidArgument("GARCH persistence sum(alpha)+sum(beta) must be < 1");
}

std::vector<double> conditional_variances(const GARCHSpec& spec, std::span<const double> data,
                                          double initial_variance) {
    const std::size_t n = data.size();
    const std::size_t q = spec.q();
    const std::size_t p = spec.p();
    std::vector<double> s2(n);
    for (std::size_t t = 0; t < n; ++t) {
        double v = spec.omega;
        for (std::size_t i = 1; i <= q; ++i) {
            v += spec.alpha[i - 1] * (t >= i ? data[t - i] * data[t - i] : initial_variance);
        }
        for (std::size_t j = 1; j <= p; ++j) {
            v += spec.beta[j - 1] * (t >= j ? s2[t - j] : initial_variance);
        }
        s2[t] = v;
    }
    return s2;
}

double gaussian_log_likelihood(std::span<const double> data, std::span<const double> sigma2) {
    if (data.size() != sigma2.size()) throw InvalidArgument("data and variance lengths differ");
    double acc = 0.0;
    for (std::size_t t = 0; t < data.size(); ++t) {
        acc += std::log(sigma2[t]) + data[t] * data[t] / sigma2[t];
    }
    return -0.5 * static_cast<double>(data.size()) * std::log(2.0 * std::numbers::pi) - 0.5 * acc;
}

double garch_log_likelihood(const GARCHSpec& spec, const Series& data) {
    validate(spec);
    if (data.size() <= spec.p() + spec.q()) throw InvalidArgument("GARCH likelihood needs T > p + q");
    const auto s2 = conditional_variances(spec, data.view(), variance(data.view()));
    for (double v : s2) {
        if (!(v > kMinVariance) || !std::isfinite(v)) throw FitFailure("conditional variance underflow");
    }
    return gaussian_log_likelihood(data.view(), s2);
}

GarchSimulation simulate_garch(const GARCHSpec& spec, std::size_t length, std::uint64_t seed) {
    validate(spec);
    if (length == 0) throw InvalidArgument("simulation length must be positive");
    Rng rng(seed);
    const std::size_t total = length + kBurnIn;
    const auto z = standard_normal(rng, total);
    const double init = spec.unconditional_variance();

    std::vector<double> eta(total), s2(total);
    for (std::size_t t = 0; t < total; ++t) {
        double v = spec.omega;
        for (std::size_t i = 1; i <= spec.q(); ++i) {
            v += spec.alpha[i - 1] * (t >= i ? eta[t - i] * eta[t - i] : init);
        }
        for (std::size_t j = 1; j <= spec.p(); ++j) v += spec.beta[j - 1] * (t >= j ? s2[t - j] : init);
        s2[t] = v;
        eta[t] = std::sqrt(v) * z[t];
    }

    GarchSimulation out;
    out.eta.assign(eta.begin() + kBurnIn, eta.end());
    out.sigma.resize(length);
    out.epsilon.assign(z.begin() + kBurnIn, z.end());
    for (std::size_t t = 0; t < length; ++t) out.sigma[t] = std::sqrt(s2[t + kBurnIn]);
    return out;
}

double aic(double log_likelihood, std::size_t parameter_count) {
    return 2.0 * static_cast<double>(parameter_count) - 2.0 * log_likelihood;
}

std::vector<double> GARCHFit::conditional_sd() const {
    std::vector<double> out(conditional_variances.size());
    std::transform(conditional_variances.begin(), conditional_variances.end(), out.begin(),
                   [](double v) { return std::sqrt(v); });
    return out;
}

std::vector<CoefficientRow> GARCHFit::coefficient_table() const {
    const auto params = spec.flatten();
    std::vector<CoefficientRow> rows;
    for (std::size_t k = 0; k < params.size(); ++k) {
        CoefficientRow row;
        if (k == 0) {
            row.name = "omega";
        } else if (k <= spec.q()) {
            row.name = "alpha" + std::to_string(k);
        } else {
            row.name = "beta" + std::to_string(k - spec.q());
        }
        row.estimate = params[k];
        if (k < standard_errors.size() && standard_errors[k] && *standard_errors[k] > 0.0) {
            row.standard_error = standard_errors[k];
            row.t_value = params[k] / *standard_errors[k];
            row.p_value = two_sided_normal_p(*row.t_value);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

// theta = (log omega, z_1..z_{p+q}); c_k = (1 - margin) e^{z_k} / (1 + sum_j e^{z_j}).
// Keeps omega > 0, every coefficient >= 0 and the persistence below 1 - margin.
std::vector<double> to_natural(const std::vector<double>& theta) {
    std::vector<double> out(theta.size());
    out[0] = std::exp(theta[0]);
    double denom = 1.0;
    for (std::size_t k = 1; k < theta.size(); ++k) denom += std::exp(theta[k]);
    for (std::size_t k = 1; k < theta.size(); ++k) {
        out[k] = (1.0 - kPersistenceMargin) * std::exp(theta[k]) / denom;
    }
    return out;
}

std::vector<double> to_unconstrained(const std::vector<double>& natural) {
    std::vector<double> theta(natural.size());
    theta[0] = std::log(natural[0]);
    double rest = 1.0;
    for (std::size_t k = 1; k < natural.size(); ++k) rest -= natural[k] / (1.0 - kPersistenceMargin);
    for (std::size_t k = 1; k < natural.size(); ++k) {
        theta[k] = std::log(natural[k] / (1.0 - kPersistenceMargin) / rest);
    }
    return theta;
}

double negative_log_likelihood(std::span<const double> natural, std::span<const double> data,
                               std::size_t p, std::size_t q, double init) {
    const GARCHSpec spec = GARCHSpec::unflatten(natural, p, q);
    const auto s2 = conditional_variances(spec, data, init);
    for (double v : s2) {
        if (!(v > kMinVariance) || !std::isfinite(v)) return std::numeric_limits<double>::infinity();
    }
    return -gaussian_log_likelihood(data, s2);
}

std::vector<std::optional<double>> hessian_standard_errors(const std::vector<double>& x,
                                                           std::span<const double> data, std::size_t p,
                                                           std::size_t q, double init, double rel_step) {
    const std::size_t d = x.size();
    std::vector<std::optional<double>> none(d);
    std::vector<double> h(d);
    for (std::size_t i = 0; i < d; ++i) h[i] = rel_step * std::max(std::abs(x[i]), 1e-3);

    auto f = [&](double di, std::size_t i, double dj, std::size_t j) {
        std::vector<double> y = x;
        y[i] += di;
        y[j] += dj;
        return negative_log_likelihood(y, data, p, q, init);
    };
    const double f0 = negative_log_likelihood(x, data, p, q, init);
    Eigen::MatrixXd hess(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i) {
        const double fp = f(h[i], i, 0.0, i);
        const double fm = f(-h[i], i, 0.0, i);
        hess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
        for (std::size_t j = i + 1; j < d; ++j) {
            const double v = (f(h[i], i, h[j], j) - f(h[i], i, -h[j], j) - f(-h[i], i, h[j], j) +
                              f(-h[i], i, -h[j], j)) /
                             (4.0 * h[i] * h[j]);
            hess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            hess(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
        }
    }
    if (!hess.allFinite()) return none;
    Eigen::LLT<Eigen::MatrixXd> llt(hess);
    if (llt.info() != Eigen::Success) return none;
    const Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(hess.rows(), hess.cols()));
    std::vector<std::optional<double>> se(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double v = cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
        if (v > 0.0 && std::isfinite(v)) se[i] = std::sqrt(v);
    }
    return se;
}

}  // namespace

GARCHFit fit_garch(const Series& data, std::size_t p, std::size_t q, const GarchFitOptions& options) {
    if (data.size() < 50) throw InvalidArgument("GARCH fit needs T >= 50");
    if (q < 1 || q > 2 || p > 2) throw InvalidArgument("supported GARCH orders are p <= 2, 1 <= q <= 2");
    if (options.starts == 0) throw InvalidArgument("GARCH fit needs at least one start");
    const auto x = data.view();
    const double init = variance(x);
    if (!(init > 0.0)) throw FitFailure("GARCH fit on a constant series");

    auto objective = [&](const std::vector<double>& theta) {
        return negative_log_likelihood(to_natural(theta), x, p, q, init);
    };

    // Moment-based start: omega = 0.1 var, total alpha 0.1, total beta 0.8 (0.9 on alpha when p = 0).
    const double alpha_total = p == 0 ? 0.5 : 0.1;
    const double beta_total = p == 0 ? 0.0 : 0.8;
    std::vector<double> base{(1.0 - alpha_total - beta_total) * init};
    for (std::size_t i = 0; i < q; ++i) base.push_back(alpha_total / static_cast<double>(q));
    for (std::size_t j = 0; j < p; ++j) base.push_back(beta_total / static_cast<double>(p));

    Rng rng(options.seed);
    std::uniform_real_distribution<double> jitter(0.5, 1.5);

    NelderMeadResult best;
    best.value = std::numeric_limits<double>::infinity();
    bool any_converged = false;
    std::size_t evaluations = 0;
    for (std::size_t s = 0; s < options.starts; ++s) {
        std::vector<double> start = base;
        if (s > 0) {
            double total = 0.0;
            for (std::size_t k = 1; k < start.size(); ++k) {
                start[k] *= jitter(rng);
                total += start[k];
            }
            if (total > 0.98) {
                for (std::size_t k = 1; k < start.size(); ++k) start[k] *= 0.98 / total;
                total = 0.98;
            }
            start[0] = init * (1.0 - total) * jitter(rng);
        }
        auto run = nelder_mead(objective, to_unconstrained(start), options.optimizer);
        evaluations += run.evaluations;
        // Restart from the optimum to escape a prematurely collapsed simplex.
        auto polish = nelder_mead(objective, run.point, options.optimizer);
        evaluations += polish.evaluations;
        if (polish.value <= run.value) run = std::move(polish);
        any_converged = any_converged || run.converged;
        if (run.value < best.value) best = std::move(run);
    }
    if (!any_converged || !std::isfinite(best.value)) {
        throw FitFailure("GARCH(" + std::to_string(p) + "," + std::to_string(q) +
                             ") optimizer did not converge after " + std::to_string(options.starts) + " starts",
                         to_natural(best.point), -best.value);
    }

    const auto natural = to_natural(best.point);
    GARCHFit fit;
    fit.spec = GARCHSpec::unflatten(natural, p, q);
    fit.conditional_variances = conditional_variances(fit.spec, x, init);
    fit.standardized_residuals.resize(x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
        fit.standardized_residuals[t] = x[t] / std::sqrt(fit.conditional_variances[t]);
    }
    fit.log_likelihood = -best.value;
    fit.aic = aic(fit.log_likelihood, fit.parameter_count());
    fit.standard_errors = hessian_standard_errors(natural, x, p, q, init, options.hessian_step);
    fit.converged = true;
    fit.evaluations = evaluations;
    return fit;
}

std::vector<OrderPair> default_garch_candidates() { return {{1, 1}, {2, 1}, {1, 2}, {2, 2}}; }

const GARCHFit& GarchOrderSelection::selected() const {
    for (const auto& c : candidates) {
        if (c.p == p && c.q == q && c.fit) return *c.fit;
    }
    throw InvalidArgument("selected GARCH candidate has no fit");
}

std::optional<double> GarchOrderSelection::aic_of(std::size_t p_, std::size_t q_) const {
    for (const auto& c : candidates) {
        if (c.p == p_ && c.q == q_ && c.fit) return c.fit->aic;
    }
    return std::nullopt;
}

GarchOrderSelection identify_garch_order(const Series& data, const std::vector<OrderPair>& candidates,
                                         const GarchFitOptions& options) {
    if (data.size() < 100) throw InvalidArgument("GARCH order identification needs T >= 100");
    if (candidates.empty()) throw InvalidArgument("no GARCH candidates given");

    GarchOrderSelection out;
    std::vector<double> squares(data.size());
    for (std::size_t t = 0; t < data.size(); ++t) squares[t] = data[t] * data[t];
    if (!is_constant(squares)) {
        const Series sq(std::move(squares));
        const std::size_t lags = std::min<std::size_t>(20, sq.size() - 1);
        out.squared_acf = sample_acf(sq, lags);
        out.squared_pacf = sample_pacf(sq, lags);
    }

    double best_aic = std::numeric_limits<double>::infinity();
    bool found = false;
    for (const auto& [p, q] : candidates) {
        GarchCandidate c;
        c.p = p;
        c.q = q;
        try {
            c.fit = fit_garch(data, p, q, options);
            if (c.fit->aic < best_aic) {
                best_aic = c.fit->aic;
                out.p = p;
                out.q = q;
                found = true;
            }
        } catch (const FitFailure& e) {
            c.error = e.what();
        }
        out.candidates.push_back(std::move(c));
    }
    if (!found) throw FitFailure("every GARCH candidate failed to fit");
    return out;
}

}  // namespace sharedvol

#include "sharedvol/ar_model.hpp"

namespace sharedvol {

ARGARCHFit fit_ar_garch(const Series& series, std::size_t ar_order, std::size_t p, std::size_t q,
                        const GarchFitOptions& options) {
    const ARFit ar = fit_ar(series, ar_order);
    const GARCHFit garch = fit_garch(Series(ar.residuals), p, q, options);
    const auto y = series.view();
    const std::size_t u = ar_order;
    const double init = variance(ar.residuals);

    std::vector<double> start{ar.spec.intercept};
    start.insert(start.end(), ar.spec.coefficients.begin(), ar.spec.coefficients.end());
    const auto garch_theta = to_unconstrained(garch.spec.flatten());
    start.insert(start.end(), garch_theta.begin(), garch_theta.end());

    std::vector<double> resid(y.size() - u);
    auto objective = [&](const std::vector<double>& theta) {
        const std::vector<double> phi(theta.begin() + 1, theta.begin() + 1 + static_cast<std::ptrdiff_t>(u));
        if (!is_stationary(phi)) return std::numeric_limits<double>::infinity();
        for (std::size_t t = u; t < y.size(); ++t) {
            double v = y[t] - theta[0];
            for (std::size_t i = 1; i <= u; ++i) v -= phi[i - 1] * y[t - i];
            resid[t - u] = v;
        }
        const std::vector<double> g(theta.begin() + 1 + static_cast<std::ptrdiff_t>(u), theta.end());
        return negative_log_likelihood(to_natural(g), resid, p, q, init);
    };

    NelderMeadOptions nm = options.optimizer;
    nm.initial_step = 0.05;
    auto run = nelder_mead(objective, start, nm);
    auto polish = nelder_mead(objective, run.point, nm);
    if (polish.value <= run.value) run = std::move(polish);
    const double start_value = objective(start);

    ARGARCHFit out;
    const auto& theta = run.value <= start_value ? run.point : start;
    out.intercept = theta[0];
    out.ar_coefficients.assign(theta.begin() + 1, theta.begin() + 1 + static_cast<std::ptrdiff_t>(u));
    const std::vector<double> g(theta.begin() + 1 + static_cast<std::ptrdiff_t>(u), theta.end());
    out.garch = GARCHSpec::unflatten(to_natural(g), p, q);
    out.log_likelihood = -std::min(run.value, start_value);
    out.converged = run.converged;
    return out;
}

}  // namespace sharedvol
