// Standard normal CDF and quantile.
#pragma once

namespace hyperbound {

// Phi(x), via erfc; absolute error well under 1e-10.
double normal_cdf(double x);

// Phi^{-1}(p) for p in (0,1).  Acklam's piecewise rational approximation
// (max relative error ~1.15e-9) refined by one Halley step against
// normal_cdf, which drives the error to a few ulp.
// Throws std::domain_error at p <= 0 or p >= 1.
double normal_quantile(double p);

}  // namespace hyperbound
