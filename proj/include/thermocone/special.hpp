#pragma once

namespace tc {

// regularised incomplete beta I_x(a, b)
double reg_inc_beta(double x, double a, double b);

double normal_pdf(double x);
double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace tc
