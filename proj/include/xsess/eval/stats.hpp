#pragma once

#include <vector>

#include "xsess/types.hpp"

namespace xsess {

// Survival function of the chi-squared distribution with 1 degree of freedom.
double chi2_sf_1df(double x);

// Regularized incomplete beta function I_x(a, b).
double betainc(double a, double b, double x);

// Survival function of the F distribution.
double f_sf(double f, double d1, double d2);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// McNemar's test with continuity correction on aligned binary hit vectors:
// chi^2 = (|b - c| - 1)^2 / (b + c) over the discordant counts. No
// discordant pairs gives p = 1.
TestResult mcnemar(const std::vector<int>& hits_a, const std::vector<int>& hits_b);

// One-way ANOVA across >= 2 groups of >= 2 values each. All-zero
// within-group variance yields p = 1 when the means agree and the p = 0
// convention (with a warning flag) when they differ.
struct AnovaResult {
  double f = 0.0;
  double p_value = 1.0;
  bool degenerate = false;  // zero within-group variance with unequal means
};
AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups);

// Holm step-down adjustment; returns adjusted p-values in input order.
std::vector<double> holm_adjust(const std::vector<double>& p_values);

}  // namespace xsess
