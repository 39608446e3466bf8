#pragma once

namespace sprec {

// Standard normal kernels. Absolute error of the cdf is below 1e-15 and the
// quantile satisfies normal_cdf(normal_quantile(p)) == p to within 1e-15.

double normal_pdf(double x) noexcept;
double normal_log_pdf(double x) noexcept;
double normal_cdf(double x) noexcept;
/// Upper tail 1 - Phi(x) without cancellation.
double normal_ccdf(double x) noexcept;
double normal_log_ccdf(double x) noexcept;
/// Phi^{-1}(p); returns -inf / +inf at p = 0 / 1 and NaN outside [0,1].
double normal_quantile(double p) noexcept;

}  // namespace sprec
