#pragma once

namespace sharedvol {

/// P(X > x) for X ~ chi-square(df). Returns 1 for x <= 0.
double chi_square_sf(double x, double df);
double normal_cdf(double x);
double normal_pdf(double x);
double normal_quantile(double p);
/// 2 * P(Z > |z|)
double two_sided_normal_p(double z);

}  // namespace sharedvol
