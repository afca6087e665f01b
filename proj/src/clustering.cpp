#include "hbi/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hbi {

namespace {

// Full pairwise squared-distance table; token counts here stay in the dozens.
Mat squared_distances(const TokenSet& ts) {
  const int n = ts.count();
  Mat d2(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < ts.dim(); ++k) {
        double diff = ts.tokens(i, k) - ts.tokens(j, k);
        acc += diff * diff;
      }
      d2(i, j) = acc;
      d2(j, i) = acc;
    }
  }
  return d2;
}

}  // namespace

int default_knn(int count) { return std::min(5, count - 1); }

std::vector<double> local_density(const TokenSet& tokens, int k_neighbors) {
  const int n = tokens.count();
  if (k_neighbors < 1 || k_neighbors >= n)
    throw std::invalid_argument("k_neighbors must be in [1, count-1]");
  Mat d2 = squared_distances(tokens);

  std::vector<double> rho(static_cast<std::size_t>(n));
  std::vector<std::pair<double, int>> order;
  order.reserve(static_cast<std::size_t>(n - 1));
  for (int i = 0; i < n; ++i) {
    order.clear();
    for (int j = 0; j < n; ++j)
      if (j != i) order.emplace_back(d2(i, j), j);
    std::partial_sort(order.begin(), order.begin() + k_neighbors, order.end());
    double mean = 0.0;
    for (int k = 0; k < k_neighbors; ++k) mean += order[k].first;
    mean /= k_neighbors;
    rho[i] = std::exp(-mean);
  }
  return rho;
}

std::vector<double> distance_index(const TokenSet& tokens, std::span<const double> rho) {
  const int n = tokens.count();
  if (static_cast<int>(rho.size()) != n)
    throw std::invalid_argument("rho length does not match token count");
  Mat d2 = squared_distances(tokens);

  auto denser = [&](int j, int i) {
    return rho[j] > rho[i] || (rho[j] == rho[i] && j < i);
  };

  std::vector<double> delta(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (int j = 0; j < n; ++j) {
      if (j == i || !denser(j, i)) continue;
      found = true;
      best = std::min(best, d2(i, j));
    }
    if (!found) {
      best = 0.0;
      for (int j = 0; j < n; ++j) best = std::max(best, d2(i, j));
    }
    delta[i] = best;
  }
  return delta;
}

ClusterResult dpc_knn_cluster(const TokenSet& tokens, int num_clusters, int k_neighbors) {
  const int n = tokens.count();
  if (num_clusters < 1 || num_clusters > n)
    throw std::invalid_argument("cluster count must be in [1, count]");

  ClusterResult result;
  result.rho = local_density(tokens, k_neighbors);
  result.delta = distance_index(tokens, result.rho);

  std::vector<int> ranked(static_cast<std::size_t>(n));
  std::iota(ranked.begin(), ranked.end(), 0);
  std::sort(ranked.begin(), ranked.end(), [&](int a, int b) {
    double sa = result.rho[a] * result.delta[a];
    double sb = result.rho[b] * result.delta[b];
    return sa > sb || (sa == sb && a < b);
  });
  result.centers.assign(ranked.begin(), ranked.begin() + num_clusters);
  std::sort(result.centers.begin(), result.centers.end());

  Mat d2 = squared_distances(tokens);
  result.assignment.assign(static_cast<std::size_t>(n), -1);
  for (int c = 0; c < num_clusters; ++c) result.assignment[result.centers[c]] = c;
  for (int i = 0; i < n; ++i) {
    if (result.assignment[i] >= 0) continue;  // centers stay their own cluster
    int best = 0;
    for (int c = 1; c < num_clusters; ++c)
      if (d2(i, result.centers[c]) < d2(i, result.centers[best])) best = c;
    result.assignment[i] = best;
  }
  return result;
}

}  // namespace hbi
