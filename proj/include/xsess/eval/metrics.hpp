#pragma once

#include <set>
#include <vector>

#include "xsess/types.hpp"

namespace xsess {

struct MetricSet {
  double hr = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double mrr = 0.0;
  double map = 0.0;
};

// Item indices sorted by descending score, ties broken by item index.
std::vector<int> rank_items(const Vector& scores);

// Truncated ranking metrics at cutoff k. `ranking` is a best-first item
// order (a prefix of length >= k is enough); `relevant` must be nonempty.
// MAP uses the min(|relevant|, k) normalizer.
MetricSet metrics_at_k(const std::vector<int>& ranking, const std::set<int>& relevant, int k);

// Coverage items whose base product is missing from the portfolio are
// forced down to zero (a score already below zero is left alone, so the
// filter can only lower scores). Base products are never touched.
Vector post_filter(const Vector& scores, const IntVector& portfolio,
                   const std::vector<int>& item_base);

}  // namespace xsess
