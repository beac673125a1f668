#ifndef FAIRCLUST_DATASET_HPP
#define FAIRCLUST_DATASET_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fairclust {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Points with positive weights, split into disjoint demographic groups.
/// Group labels are dense 0-based integers; original labels (when the data
/// came from a file) live in group_names. Immutable after construction:
/// every operation in the library takes it by const reference.
struct GroupedDataset {
    Matrix points;                         // n x d, one row per point
    Vector weights;                        // n, all positive
    std::vector<int> group_of;             // n, values in [0, n_groups)
    int n_groups = 0;
    std::vector<std::string> group_names;  // optional, size n_groups when set

    Eigen::Index n() const { return points.rows(); }
    int dim() const { return static_cast<int>(points.cols()); }

    // total weight of group j
    double group_weight(int j) const {
        double w = 0.0;
        for (Eigen::Index i = 0; i < n(); ++i)
            if (group_of[static_cast<std::size_t>(i)] == j) w += weights[i];
        return w;
    }

    // row indices of group j, in dataset order
    std::vector<int> group_indices(int j) const {
        std::vector<int> idx;
        for (Eigen::Index i = 0; i < n(); ++i)
            if (group_of[static_cast<std::size_t>(i)] == j) idx.push_back(static_cast<int>(i));
        return idx;
    }

    std::string group_label(int j) const {
        if (j >= 0 && j < static_cast<int>(group_names.size())) return group_names[j];
        return "group" + std::to_string(j + 1);
    }
};

/// Reports every invariant violation; empty means the dataset is well formed.
std::vector<std::string> validate(const GroupedDataset& data);

/// Assignment of points to k clusters. Empty clusters are legal only
/// transiently inside the Lloyd loop.
struct Partition {
    std::vector<int> cluster_of;  // values in [0, k)
    int k = 0;
};

struct CenterSet {
    Matrix centers;  // k x d
    int k() const { return static_cast<int>(centers.rows()); }
    int dim() const { return static_cast<int>(centers.cols()); }
};

enum class ProjectorMode { rounded, fractional };

/// k linear subspaces of dimension q, each represented by a d x (d-q)
/// orthonormal basis of its orthogonal complement (rounded mode), or by the
/// relaxed symmetric matrices Zhat_i with eigenvalues in [0,1] and
/// trace >= d-q (fractional mode).
struct ProjectorSet {
    ProjectorMode mode = ProjectorMode::rounded;
    std::vector<Matrix> basis;  // rounded: k matrices, d x (d-q)
    std::vector<Matrix> zhat;   // fractional: k matrices, d x d
    int q = 0;

    int k() const {
        return static_cast<int>(mode == ProjectorMode::rounded ? basis.size() : zhat.size());
    }
    int dim() const {
        if (mode == ProjectorMode::rounded)
            return basis.empty() ? 0 : static_cast<int>(basis[0].rows());
        return zhat.empty() ? 0 : static_cast<int>(zhat[0].rows());
    }
};

std::vector<std::string> validate(const ProjectorSet& projectors);

/// Parameter echo carried through solutions and reports.
struct SolveParams {
    int k = 1;
    double z = 2.0;
    int q = 0;       // subspace objective only
    int samples = 0; // M
    int iters = 0;   // T
};

/// Output of any fair solver: centers or subspaces, the optimal max mean
/// z-power group cost beta, and the z-th-rooted per-group costs.
struct FairSolution {
    std::optional<CenterSet> centers;
    std::optional<ProjectorSet> projectors;
    double beta = 0.0;      // max_j mean z-power cost
    Vector per_group_cost;  // z-th rooted
    int iterations = 0;
    std::uint64_t seed = 0;
    SolveParams params;
    bool budget_exhausted = false;

    double fcost() const { return per_group_cost.size() ? per_group_cost.maxCoeff() : 0.0; }
};

}  // namespace fairclust

#endif  // FAIRCLUST_DATASET_HPP
