#include "xsess/sessionize/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace xsess {

namespace {

constexpr double kSigmaFloor = 1e-8;
constexpr double kLogTwoPi = 1.8378770664093454836;

double log_gauss(double x, double mu, double sigma) {
  const double z = (x - mu) / sigma;
  return -0.5 * (z * z + kLogTwoPi) - std::log(sigma);
}

void require_fittable(const std::vector<double>& xs) {
  std::set<double> distinct(xs.begin(), xs.end());
  if (distinct.size() < 2) {
    fail("fit_gmm2_em: need at least 2 distinct values");
  }
}

double quantile(std::vector<double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

double Gmm2::density1(double x) const { return w1 * std::exp(log_gauss(x, mu1, sigma1)); }
double Gmm2::density2(double x) const { return w2 * std::exp(log_gauss(x, mu2, sigma2)); }

double Gmm2::log_likelihood(const std::vector<double>& xs) const {
  double ll = 0.0;
  for (double x : xs) {
    const double a = std::log(w1) + log_gauss(x, mu1, sigma1);
    const double b = std::log(w2) + log_gauss(x, mu2, sigma2);
    const double m = std::max(a, b);
    ll += m + std::log(std::exp(a - m) + std::exp(b - m));
  }
  return ll;
}

std::vector<double> inter_session_gaps(const std::vector<Session>& sessions) {
  std::vector<double> gaps;
  for (std::size_t i = 1; i < sessions.size(); ++i) {
    if (sessions[i].user_id != sessions[i - 1].user_id) continue;
    const double gap =
        static_cast<double>(sessions[i].start_time() - sessions[i - 1].start_time());
    if (gap < 0.0) {
      fail("inter_session_gaps: sessions of user '" + sessions[i].user_id +
           "' are not sorted by start time");
    }
    gaps.push_back(gap);
  }
  return gaps;
}

Gmm2 gmm2_init_quantiles(const std::vector<double>& xs) {
  require_fittable(xs);
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  Gmm2 g;
  g.mu1 = quantile(sorted, 0.25);
  g.mu2 = quantile(sorted, 0.75);
  double var = 0.0, mean = 0.0;
  for (double x : sorted) mean += x;
  mean /= static_cast<double>(sorted.size());
  for (double x : sorted) var += (x - mean) * (x - mean);
  var /= static_cast<double>(sorted.size());
  g.sigma1 = g.sigma2 = std::max(std::sqrt(var / 2.0), 10.0 * kSigmaFloor);
  g.w1 = g.w2 = 0.5;
  if (g.mu1 == g.mu2) {  // heavy ties at the quartiles
    g.mu1 = sorted.front();
    g.mu2 = sorted.back();
  }
  return g;
}

Gmm2 gmm2_init_kmeanspp(const std::vector<double>& xs, Rng& rng) {
  require_fittable(xs);
  const std::size_t n = xs.size();
  const double c1 = xs[rng.below(n)];
  // Second seed drawn proportionally to squared distance from the first.
  Vector d2(static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double d = xs[i] - c1;
    d2[static_cast<Index>(i)] = d * d;
  }
  if (d2.sum() <= 0.0) return gmm2_init_quantiles(xs);
  const double c2 = xs[static_cast<std::size_t>(rng.weighted(d2))];

  // One assignment pass to moments.
  double lo = std::min(c1, c2), hi = std::max(c1, c2);
  double n1 = 0, n2 = 0, s1 = 0, s2 = 0, q1 = 0, q2 = 0;
  for (double x : xs) {
    if (std::abs(x - lo) <= std::abs(x - hi)) {
      ++n1, s1 += x, q1 += x * x;
    } else {
      ++n2, s2 += x, q2 += x * x;
    }
  }
  if (n1 == 0 || n2 == 0) return gmm2_init_quantiles(xs);
  Gmm2 g;
  g.mu1 = s1 / n1;
  g.mu2 = s2 / n2;
  g.sigma1 = std::max(std::sqrt(std::max(q1 / n1 - g.mu1 * g.mu1, 0.0)), 10.0 * kSigmaFloor);
  g.sigma2 = std::max(std::sqrt(std::max(q2 / n2 - g.mu2 * g.mu2, 0.0)), 10.0 * kSigmaFloor);
  g.w1 = n1 / static_cast<double>(n);
  g.w2 = n2 / static_cast<double>(n);
  return g;
}

Gmm2FitResult fit_gmm2_em(const std::vector<double>& xs, const Gmm2& init, double tol,
                          int max_iter) {
  if (!(tol > 0.0)) fail("fit_gmm2_em: tol must be positive");
  require_fittable(xs);
  const auto n = static_cast<double>(xs.size());

  Gmm2FitResult res;
  res.model = init;
  Gmm2& g = res.model;
  double prev_ll = -std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < max_iter; ++iter) {
    // E-step: responsibilities of component 1; LL falls out of the same pass.
    double ll = 0.0;
    double r_sum = 0.0, rx1 = 0.0, rx2 = 0.0, rq1 = 0.0, rq2 = 0.0;
    for (double x : xs) {
      const double a = std::log(g.w1) + log_gauss(x, g.mu1, g.sigma1);
      const double b = std::log(g.w2) + log_gauss(x, g.mu2, g.sigma2);
      const double m = std::max(a, b);
      const double denom = std::exp(a - m) + std::exp(b - m);
      ll += m + std::log(denom);
      const double r = std::exp(a - m) / denom;
      r_sum += r;
      rx1 += r * x;
      rx2 += (1.0 - r) * x;
      rq1 += r * x * x;
      rq2 += (1.0 - r) * x * x;
    }
    res.log_likelihoods.push_back(ll);
    res.iterations = iter + 1;
    if ((ll - prev_ll) / n < tol && iter > 0) {
      res.converged = true;
      break;
    }
    prev_ll = ll;

    // M-step.
    const double n1 = r_sum, n2 = n - r_sum;
    if (n1 <= 0.0 || n2 <= 0.0) {
      fail("fit_gmm2_em: a component lost all responsibility; use a variance floor or "
           "better initialization");
    }
    g.mu1 = rx1 / n1;
    g.mu2 = rx2 / n2;
    g.sigma1 = std::sqrt(std::max(rq1 / n1 - g.mu1 * g.mu1, 0.0));
    g.sigma2 = std::sqrt(std::max(rq2 / n2 - g.mu2 * g.mu2, 0.0));
    g.w1 = n1 / n;
    g.w2 = n2 / n;
    if (g.sigma1 < kSigmaFloor || g.sigma2 < kSigmaFloor) {
      fail("fit_gmm2_em: component variance collapsed below 1e-8; the data are degenerate "
           "(consider a variance floor or removing duplicate points)");
    }
  }

  if (g.mu1 > g.mu2) {
    std::swap(g.mu1, g.mu2);
    std::swap(g.sigma1, g.sigma2);
    std::swap(g.w1, g.w2);
  }
  return res;
}

double crossing_point(const Gmm2& g) {
  if (!(g.mu1 < g.mu2)) fail("crossing_point: requires mu1 < mu2");
  // Equal weighted densities <=> quadratic in x:
  //   (1/(2*s2^2) - 1/(2*s1^2)) x^2 + (mu1/s1^2 - mu2/s2^2) x
  //   + mu2^2/(2*s2^2) - mu1^2/(2*s1^2) - log(w2*s1/(w1*s2)) = 0
  const double v1 = g.sigma1 * g.sigma1, v2 = g.sigma2 * g.sigma2;
  const double a = 0.5 / v2 - 0.5 / v1;
  const double b = g.mu1 / v1 - g.mu2 / v2;
  const double c =
      0.5 * g.mu2 * g.mu2 / v2 - 0.5 * g.mu1 * g.mu1 / v1 - std::log(g.w2 * g.sigma1 / (g.w1 * g.sigma2));

  const double lo = g.mu1, hi = g.mu2;
  auto in_range = [&](double x) { return x >= lo && x <= hi; };
  double root = std::numeric_limits<double>::quiet_NaN();
  if (std::abs(a) < 1e-300) {
    if (b == 0.0) fail("crossing_point: degenerate equation (no isolated root)");
    root = -c / b;
    if (!in_range(root)) {
      fail("crossing_point: linear root " + std::to_string(root) + " outside [mu1, mu2]");
    }
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
      fail("crossing_point: no real root; discriminant = " + std::to_string(disc));
    }
    // Numerically stable pair of roots.
    const double q = -0.5 * (b + (b >= 0.0 ? 1.0 : -1.0) * std::sqrt(disc));
    const double r1 = q / a;
    const double r2 = (q != 0.0) ? c / q : -b / a - r1;
    if (in_range(r1) && (!in_range(r2) || std::abs(r1 - 0.5 * (lo + hi)) <= std::abs(r2 - 0.5 * (lo + hi)))) {
      root = r1;
    } else if (in_range(r2)) {
      root = r2;
    } else {
      fail("crossing_point: no root in [mu1, mu2]; discriminant = " + std::to_string(disc));
    }
  }

  // Newton polish on the log-density difference pins the residual density
  // difference near machine precision.
  for (int i = 0; i < 4; ++i) {
    const double f = std::log(g.w1) + log_gauss(root, g.mu1, g.sigma1) - std::log(g.w2) -
                     log_gauss(root, g.mu2, g.sigma2);
    const double df = -(root - g.mu1) / v1 + (root - g.mu2) / v2;
    if (df == 0.0) break;
    const double next = root - f / df;
    if (!in_range(next)) break;
    root = next;
  }
  return root;
}

double crossing_threshold(const Gmm2& g) { return std::exp(crossing_point(g)); }

}  // namespace xsess
