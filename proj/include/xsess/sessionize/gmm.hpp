#pragma once

#include <vector>

#include "xsess/core/data.hpp"
#include "xsess/rng.hpp"

namespace xsess {

// Two-component univariate Gaussian mixture on the log-duration scale.
struct Gmm2 {
  double w1 = 0.5, w2 = 0.5;      // mixture weights, w1 + w2 == 1
  double mu1 = 0.0, mu2 = 0.0;    // component means, mu1 <= mu2 after fitting
  double sigma1 = 1.0, sigma2 = 1.0;

  double log_likelihood(const std::vector<double>& xs) const;
  // Weighted component densities w_i * phi(x; mu_i, sigma_i).
  double density1(double x) const;
  double density2(double x) const;
};

struct Gmm2FitResult {
  Gmm2 model;
  std::vector<double> log_likelihoods;  // one entry per EM iteration
  int iterations = 0;
  bool converged = false;
};

// Start-time differences of consecutive sessions per user. `sessions` must
// be grouped by user and sorted by start time; a negative difference is an
// error. Users with a single session contribute nothing.
std::vector<double> inter_session_gaps(const std::vector<Session>& sessions);

// Deterministic quartile-based initialization.
Gmm2 gmm2_init_quantiles(const std::vector<double>& xs);
// k-means++-style 2-seeding followed by one assignment pass.
Gmm2 gmm2_init_kmeanspp(const std::vector<double>& xs, Rng& rng);

// Expectation-maximization from the given starting point. Stops when the
// mean log-likelihood improves by less than `tol` or after `max_iter`
// iterations. A component standard deviation falling below 1e-8 aborts with
// an error suggesting a variance floor. Components are returned with
// mu1 <= mu2.
Gmm2FitResult fit_gmm2_em(const std::vector<double>& xs, const Gmm2& init, double tol = 1e-8,
                          int max_iter = 500);

// The point in [mu1, mu2] where the two weighted component densities are
// equal, i.e. where membership flips. Requires mu1 < mu2; throws (reporting
// the discriminant) when no real root lies in the interval.
double crossing_point(const Gmm2& g);

// exp(crossing_point): the inactivity threshold on the original time scale.
double crossing_threshold(const Gmm2& g);

}  // namespace xsess
