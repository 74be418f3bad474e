#include "xsess/eval/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace xsess {

std::vector<int> rank_items(const Vector& scores) {
  std::vector<int> idx(static_cast<std::size_t>(scores.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return scores[a] > scores[b]; });
  return idx;
}

MetricSet metrics_at_k(const std::vector<int>& ranking, const std::set<int>& relevant, int k) {
  if (k < 1) fail("metrics_at_k: k must be >= 1");
  if (relevant.empty()) fail("metrics_at_k: relevant set must be nonempty");
  const int depth = std::min<int>(k, static_cast<int>(ranking.size()));

  int hits = 0;
  int first_hit_rank = 0;       // 1-based, 0 = none
  double ap_sum = 0.0;
  for (int r = 0; r < depth; ++r) {
    if (relevant.count(ranking[static_cast<std::size_t>(r)])) {
      ++hits;
      if (first_hit_rank == 0) first_hit_rank = r + 1;
      ap_sum += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
  }

  MetricSet m;
  m.hr = hits > 0 ? 1.0 : 0.0;
  m.precision = static_cast<double>(hits) / static_cast<double>(k);
  m.recall = static_cast<double>(hits) / static_cast<double>(relevant.size());
  m.mrr = first_hit_rank > 0 ? 1.0 / static_cast<double>(first_hit_rank) : 0.0;
  m.map = ap_sum / static_cast<double>(std::min<std::size_t>(relevant.size(),
                                                             static_cast<std::size_t>(k)));
  return m;
}

Vector post_filter(const Vector& scores, const IntVector& portfolio,
                   const std::vector<int>& item_base) {
  if (scores.size() != static_cast<Index>(item_base.size()) || portfolio.size() != scores.size()) {
    fail("post_filter: catalog size mismatch");
  }
  Vector out = scores;
  for (Index k = 0; k < out.size(); ++k) {
    const int base = item_base[static_cast<std::size_t>(k)];
    if (base >= 0 && portfolio[base] <= 0) {
      out[k] = std::min(out[k], 0.0);
    }
  }
  return out;
}

}  // namespace xsess
