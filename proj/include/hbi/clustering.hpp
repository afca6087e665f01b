#ifndef HBI_CLUSTERING_HPP
#define HBI_CLUSTERING_HPP

#include <span>
#include <vector>

#include "hbi/token_set.hpp"

namespace hbi {

/// Output of density-peaks clustering over one token set. All ties (neighbor
/// distance, density ranking, nearest center) break toward the lower index;
/// that total order is part of the contract and makes results reproducible.
struct ClusterResult {
  std::vector<int> assignment;  // per token, cluster id 0..M-1
  std::vector<int> centers;     // token index of each cluster's center, ascending
  std::vector<double> rho;      // per-token local density
  std::vector<double> delta;    // per-token squared distance to a denser token

  int num_clusters() const { return static_cast<int>(centers.size()); }
};

int default_knn(int count);  // min(5, count - 1)

/// rho_i = exp(-mean of squared distances to the K nearest neighbors).
/// Neighbors exclude the token itself; equidistant neighbors are ordered by
/// index.
std::vector<double> local_density(const TokenSet& tokens, int k_neighbors);

/// delta_i = squared distance to the nearest denser token, or the maximum
/// squared distance to any token if none is denser. "Denser" follows the
/// total order (rho descending, index ascending), so among equal densities
/// the lowest index acts as the densest.
std::vector<double> distance_index(const TokenSet& tokens, std::span<const double> rho);

/// Picks the M tokens with the largest rho*delta as centers and assigns every
/// other token to its Euclidean-nearest center. Deterministic.
ClusterResult dpc_knn_cluster(const TokenSet& tokens, int num_clusters, int k_neighbors);

}  // namespace hbi

#endif
