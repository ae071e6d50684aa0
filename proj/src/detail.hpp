#pragma once

// Unchecked kernels shared between translation units. Callers validate the
// parameters once up front and then evaluate many times.

#include "gldlmom/gld.hpp"

namespace gldlmom::detail {

double quantile_unchecked(const GldParams& p, double u);
double quantile_density_unchecked(const GldParams& p, double u);
double cdf_unchecked(const GldParams& p, double x);

}  // namespace gldlmom::detail
