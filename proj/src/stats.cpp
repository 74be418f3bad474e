#include "xsess/eval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace xsess {

double chi2_sf_1df(double x) {
  if (x <= 0.0) return 1.0;
  return std::erfc(std::sqrt(x / 2.0));
}

namespace {

// Continued fraction for the incomplete beta function (Lentz's method).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double betainc(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double f_sf(double f, double d1, double d2) {
  if (f <= 0.0) return 1.0;
  return betainc(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

TestResult mcnemar(const std::vector<int>& hits_a, const std::vector<int>& hits_b) {
  if (hits_a.size() != hits_b.size()) fail("mcnemar: hit vectors differ in length");
  long b = 0, c = 0;
  for (std::size_t i = 0; i < hits_a.size(); ++i) {
    if (hits_a[i] && !hits_b[i]) ++b;
    if (!hits_a[i] && hits_b[i]) ++c;
  }
  TestResult r;
  if (b + c == 0) {
    r.statistic = 0.0;
    r.p_value = 1.0;
    return r;
  }
  const double diff = std::abs(static_cast<double>(b - c)) - 1.0;
  r.statistic = diff * diff / static_cast<double>(b + c);
  r.p_value = chi2_sf_1df(r.statistic);
  return r;
}

AnovaResult anova_oneway(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) fail("anova_oneway: need at least 2 groups");
  long n_total = 0;
  double grand_sum = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) fail("anova_oneway: every group needs at least 2 values");
    n_total += static_cast<long>(g.size());
    grand_sum += std::accumulate(g.begin(), g.end(), 0.0);
  }
  const double grand_mean = grand_sum / static_cast<double>(n_total);

  double ss_between = 0.0, ss_within = 0.0;
  for (const auto& g : groups) {
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
    ss_between += static_cast<double>(g.size()) * (mean - grand_mean) * (mean - grand_mean);
    for (double x : g) ss_within += (x - mean) * (x - mean);
  }
  const double df_between = static_cast<double>(groups.size()) - 1.0;
  const double df_within = static_cast<double>(n_total) - static_cast<double>(groups.size());

  AnovaResult r;
  if (ss_within <= 0.0) {
    if (ss_between <= 0.0) {
      r.f = 0.0;
      r.p_value = 1.0;
    } else {
      // All groups constant but different: infinitely strong evidence.
      r.f = std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
      r.degenerate = true;
    }
    return r;
  }
  r.f = (ss_between / df_between) / (ss_within / df_within);
  r.p_value = f_sf(r.f, df_between, df_within);
  return r;
}

std::vector<double> holm_adjust(const std::vector<double>& p_values) {
  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
  std::vector<double> adjusted(m);
  double running_max = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double scaled = static_cast<double>(m - i) * p_values[order[i]];
    running_max = std::max(running_max, std::min(scaled, 1.0));
    adjusted[order[i]] = running_max;
  }
  return adjusted;
}

}  // namespace xsess
