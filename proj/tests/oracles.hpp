#pragma once

// Independent reference implementations. Nothing here calls library numerics.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

// Gaussian elimination with partial pivoting, long double throughout.
inline std::vector<double> solve(std::vector<std::vector<long double>> a, std::vector<long double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        }
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        if (a[col][col] == 0.0L) throw std::runtime_error("singular");
        for (std::size_t r = col + 1; r < n; ++r) {
            const long double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<long double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        long double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return {x.begin(), x.end()};
}

inline double acf(const std::vector<double>& y, std::size_t k) {
    const std::size_t T = y.size();
    long double m = 0.0L;
    for (double v : y) m += v;
    m /= static_cast<long double>(T);
    long double num = 0.0L, den = 0.0L;
    for (std::size_t t = 0; t < T; ++t) den += (y[t] - m) * (y[t] - m);
    for (std::size_t t = k; t < T; ++t) num += (y[t] - m) * (y[t - k] - m);
    return static_cast<double>(num / den);
}

// phi_{k,k} as the last element of the order-k Yule-Walker solution.
inline double pacf(const std::vector<double>& y, std::size_t k) {
    std::vector<double> rho(k + 1, 1.0);
    for (std::size_t j = 1; j <= k; ++j) rho[j] = acf(y, j);
    std::vector<std::vector<long double>> r(k, std::vector<long double>(k));
    std::vector<long double> b(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) r[i][j] = rho[i > j ? i - j : j - i];
        b[i] = rho[i + 1];
    }
    return solve(r, b).back();
}

// (intercept, phi_1..phi_u) from X'X beta = X'y.
inline std::vector<double> ols_ar(const std::vector<double>& y, std::size_t u) {
    const std::size_t n = u + 1;
    std::vector<std::vector<long double>> xtx(n, std::vector<long double>(n, 0.0L));
    std::vector<long double> xty(n, 0.0L);
    for (std::size_t t = u; t < y.size(); ++t) {
        std::vector<long double> row(n, 1.0L);
        for (std::size_t i = 1; i <= u; ++i) row[i] = y[t - i];
        for (std::size_t i = 0; i < n; ++i) {
            xty[i] += row[i] * y[t];
            for (std::size_t j = 0; j < n; ++j) xtx[i][j] += row[i] * row[j];
        }
    }
    return solve(xtx, xty);
}

// Gaussian GARCH log-likelihood, recursion seeded with `init` for every pre-sample term.
inline double garch_loglik(double omega, const std::vector<double>& alpha, const std::vector<double>& beta,
                           const std::vector<double>& eta, double init) {
    const std::size_t T = eta.size();
    std::vector<long double> s2(T);
    long double ll = 0.0L;
    for (std::size_t t = 0; t < T; ++t) {
        long double v = omega;
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            const long double e = t > i ? static_cast<long double>(eta[t - i - 1]) * eta[t - i - 1] : init;
            v += alpha[i] * e;
        }
        for (std::size_t j = 0; j < beta.size(); ++j) v += beta[j] * (t > j ? s2[t - j - 1] : init);
        s2[t] = v;
        ll += -0.5L * (std::log(2.0L * std::numbers::pi_v<long double>) + std::log(v) +
                       static_cast<long double>(eta[t]) * eta[t] / v);
    }
    return static_cast<double>(ll);
}

// Regularized upper incomplete gamma Q(a, x) via the lower series P = x^a e^-x / Gamma(a+1) * sum x^n / (a+1)...(a+n).
inline double chi_square_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    const long double a = df / 2.0L, z = x / 2.0L;
    long double term = 1.0L / a, sum = term;
    for (int n = 1; n < 100000; ++n) {
        term *= z / (a + n);
        sum += term;
        if (term < sum * 1e-21L) break;
    }
    const long double logp = a * std::log(z) - z - std::lgamma(a) + std::log(sum);
    return static_cast<double>(1.0L - std::exp(logp));
}

inline double ljung_box_q(const std::vector<double>& y, std::size_t m) {
    const double T = static_cast<double>(y.size());
    double s = 0.0;
    for (std::size_t k = 1; k <= m; ++k) {
        const double r = acf(y, k);
        s += r * r / (T - static_cast<double>(k));
    }
    return T * (T + 2.0) * s;
}

}  // namespace oracle
