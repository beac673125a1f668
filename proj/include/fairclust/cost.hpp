#ifndef FAIRCLUST_COST_HPP
#define FAIRCLUST_COST_HPP

#include "fairclust/dataset.hpp"

namespace fairclust {

/// Per-group cost report: fcost is the max over groups of the z-th-rooted
/// per-group cost.
struct FairCostResult {
    double fcost = 0.0;
    Vector per_group;
};

// Internal form carried by the solvers: mean of w(x) * min_i ||x - c_i||^z,
// normalized by the total weight. The 1/z root is applied only at reporting
// boundaries.
double mean_power_cost(const CenterSet& centers, const Matrix& pts, const Vector& w, double z);

/// (sum_x w(x) min_i ||c_i - x||^z / sum_x w(x))^(1/z). Ties between centers
/// go to the lowest center index. Throws InputError on an empty point set.
double clustering_cost(const CenterSet& centers, const Matrix& pts, const Vector& w, double z);

/// Per-group clustering cost and their maximum.
FairCostResult fair_cost(const CenterSet& centers, const GroupedDataset& data, double z);

double mean_power_subspace_cost(const ProjectorSet& projectors, const Matrix& pts,
                                const Vector& w, double z);

/// Same as clustering_cost with distances ||x^T Z_i||_2 to the nearest of the
/// k subspaces. Requires a rounded ProjectorSet.
double subspace_cost(const ProjectorSet& projectors, const Matrix& pts, const Vector& w,
                     double z);

FairCostResult fair_subspace_cost(const ProjectorSet& projectors, const GroupedDataset& data,
                                  double z);

/// Exact per-group representation of the k-means objective under a fixed
/// partition: per-cluster weighted centroids, cluster masses, and the
/// within-cluster scatter constant a_j. Valid for z = 2 only.
struct CompressedGroup {
    Matrix centroids;           // k x d
    Vector masses;              // k, total weight of each cell (i, j)
    double scatter = 0.0;       // a_j
    double total_weight = 0.0;  // W_j

    int k() const { return static_cast<int>(centroids.rows()); }
    int dim() const { return static_cast<int>(centroids.cols()); }
};

CompressedGroup compress_group(const GroupedDataset& data, const Partition& partition, int group,
                               double z = 2.0);

// Compression of an arbitrary weighted point set with explicit cluster labels
// (used for samples inside the drivers).
CompressedGroup compress_cells(const Matrix& pts, const Vector& w,
                               const std::vector<int>& cluster_of, int k);

/// ((sum_i mass_i ||mu_i - c_i||^2 + a_j) / W_j)^(1/2). Cluster membership is
/// fixed by the compression: c_i pairs with centroid i, no reassignment.
double compressed_group_cost(const CompressedGroup& cg, const CenterSet& centers);

double compressed_group_mean_power(const CompressedGroup& cg, const CenterSet& centers);

}  // namespace fairclust

#endif  // FAIRCLUST_COST_HPP
