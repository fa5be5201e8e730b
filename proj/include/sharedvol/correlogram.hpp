#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "sharedvol/series.hpp"

namespace sharedvol {

struct CorrelogramPoint {
    std::size_t lag;
    double value;
};

/// Sample autocorrelations rho_1..rho_max_lag around the sample mean.
/// rho_0 = 1 by convention and is not returned.
/// Throws InvalidArgument when max_lag >= T and DegenerateInput for a constant series.
std::vector<CorrelogramPoint> sample_acf(const Series& series, std::size_t max_lag);

/// Sample partial autocorrelations phi_{k,k}, k = 1..max_lag, via Durbin-Levinson.
std::vector<CorrelogramPoint> sample_pacf(const Series& series, std::size_t max_lag);

/// Durbin-Levinson recursion on autocorrelations rho_1..rho_m; returns phi_{k,k}.
std::vector<double> durbin_levinson(const std::vector<double>& rho);

/// Two standard errors of a white-noise sample (P)ACF: 2 / sqrt(T).
double significance_limit(std::size_t length);

/// Lag-0 Pearson correlation between every pair of panel series.
/// Throws DegenerateInput naming the first constant series.
Eigen::MatrixXd cross_correlation_matrix(const Panel& panel);

}  // namespace sharedvol
