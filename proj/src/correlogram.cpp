#include "sharedvol/correlogram.hpp"

#include <algorithm>
#include <cmath>

#include "sharedvol/errors.hpp"

namespace sharedvol {

namespace {

void check_lag(const Series& series, std::size_t max_lag) {
    if (max_lag == 0 || max_lag >= series.size()) {
        throw InvalidArgument("max_lag must be in [1, T), got " + std::to_string(max_lag) +
                              " for T = " + std::to_string(series.size()));
    }
    if (is_constant(series.view())) {
        throw DegenerateInput("constant series has no autocorrelation");
    }
}

std::vector<double> autocorrelations(const Series& series, std::size_t max_lag) {
    const auto x = series.view();
    const std::size_t n = x.size();
    const double m = mean(x);
    std::vector<double> d(n);
    for (std::size_t t = 0; t < n; ++t) d[t] = x[t] - m;

    double denom = 0.0;
    for (double v : d) denom += v * v;

    std::vector<double> rho(max_lag);
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) num += d[t] * d[t + k];
        rho[k - 1] = num / denom;
    }
    return rho;
}

std::vector<CorrelogramPoint> to_points(const std::vector<double>& values) {
    std::vector<CorrelogramPoint> out(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) out[k] = {k + 1, values[k]};
    return out;
}

}  // namespace

std::vector<CorrelogramPoint> sample_acf(const Series& series, std::size_t max_lag) {
    check_lag(series, max_lag);
    return to_points(autocorrelations(series, max_lag));
}

std::vector<double> durbin_levinson(const std::vector<double>& rho) {
    const std::size_t m = rho.size();
    std::vector<double> pacf(m);
    std::vector<double> phi;  // phi_{k,1..k}
    phi.reserve(m);
    for (std::size_t k = 1; k <= m; ++k) {
        double num = rho[k - 1];
        double den = 1.0;
        for (std::size_t j = 1; j < k; ++j) {
            num -= phi[j - 1] * rho[k - j - 1];
            den -= phi[j - 1] * rho[j - 1];
        }
        const double kk = num / den;
        std::vector<double> next(k);
        for (std::size_t j = 1; j < k; ++j) next[j - 1] = phi[j - 1] - kk * phi[k - j - 1];
        next[k - 1] = kk;
        phi = std::move(next);
        pacf[k - 1] = kk;
    }
    return pacf;
}

std::vector<CorrelogramPoint> sample_pacf(const Series& series, std::size_t max_lag) {
    check_lag(series, max_lag);
    return to_points(durbin_levinson(autocorrelations(series, max_lag)));
}

double significance_limit(std::size_t length) {
    if (length < 2) throw InvalidArgument("significance limit needs T >= 2");
    return 2.0 / std::sqrt(static_cast<double>(length));
}

Eigen::MatrixXd cross_correlation_matrix(const Panel& panel) {
    const std::size_t k = panel.size();
    if (k < 2) throw InvalidArgument("cross-correlation needs at least 2 series");
    const std::size_t n = panel.length();

    Eigen::MatrixXd z(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
        const auto x = panel[i].view();
        if (is_constant(x)) {
            throw DegenerateInput("series '" + panel.labels()[i] + "' is constant");
        }
        const double m = mean(x);
        double ss = 0.0;
        for (double v : x) ss += (v - m) * (v - m);
        const double scale = 1.0 / std::sqrt(ss);
        for (std::size_t t = 0; t < n; ++t) {
            z(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) = (x[t] - m) * scale;
        }
    }
    Eigen::MatrixXd c = z.transpose() * z;
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
        c(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < c.cols(); ++j) {
            const double v = std::clamp(0.5 * (c(i, j) + c(j, i)), -1.0, 1.0);
            c(i, j) = v;
            c(j, i) = v;
        }
    }
    return c;
}

}  // namespace sharedvol
