#ifndef FAIRCLUST_DRIVER_HPP
#define FAIRCLUST_DRIVER_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "fairclust/fair_subspace.hpp"

namespace fairclust {

/// One heuristic iteration as scored on the full dataset.
struct IterationRecord {
    double fcost = 0.0;
    Vector per_group;
    double seconds = 0.0;  // elapsed since the start of the run
};

/// History of one run; best_index points at the iterate that was returned.
struct RunTrace {
    std::vector<IterationRecord> iterations;
    int best_index = -1;
    std::uint64_t seed = 0;
};

enum class ObjectiveKind { centers, subspaces };

/// Knobs of one heuristic run. The solver sub-configs travel as-is; their
/// seeds are overridden per iteration from the run seed.
struct DriverConfig {
    ObjectiveKind objective = ObjectiveKind::centers;
    int k = 1;
    double z = 2.0;
    int q = 0;            // subspaces only
    int samples = 100;    // per-cell sample size M
    int iterations = 20;  // T
    bool use_ellipsoid = false;
    SubgradientConfig subgradient;
    EllipsoidConfig ellipsoid;
    SubspaceSolveConfig subspace;
    std::uint64_t seed = 0;
};

/// Nearest-center assignment, ties to the lowest index. An empty cluster is
/// reseeded with the point contributing most to the fair cost, stolen from a
/// cluster that keeps at least two points.
Partition assign_points(const GroupedDataset& data, const CenterSet& centers, double z);

/// Nearest-subspace assignment with the same tie and reseed rules.
Partition assign_points(const GroupedDataset& data, const ProjectorSet& projectors, double z);

struct LloydResult {
    FairSolution solution;
    RunTrace trace;
};

/// Lloyd-style loop: uniform random initial labels, an exact per-cell
/// compression (centers, z = 2) or a uniform per-cell sample of size M as the
/// representative set, a fair solve on that set, then nearest reassignment.
/// Returns the best iterate by full-data fair cost; stops early once the
/// relative change stays below 1e-6 for three consecutive iterations.
LloydResult lloyd_fair(const GroupedDataset& data, const DriverConfig& config);

/// Visits every clustering of n items into at most k unlabeled clusters,
/// exactly once per clustering (first item pinned to cluster 0).
void for_each_labeling(int n, int k, const std::function<void(const std::vector<int>&)>& visit);

/// Number of clusterings for_each_labeling visits.
std::uint64_t labeling_count(int n, int k);

/// Tries every labeling of the coreset, solves each fixed partition, and keeps
/// the solution whose max per-group cost on the coreset is smallest (ties to
/// the earliest labeling). The result carries full-dataset costs. Throws
/// InputError when k^|coreset| exceeds 1e7.
FairSolution exhaustive_framework(const WeightedSample& coreset, const GroupedDataset& data,
                                  const DriverConfig& config);

struct MultiRestartResult {
    FairSolution best;
    std::vector<RunTrace> traces;
};

/// Independent runs with seeds base_seed .. base_seed + restarts - 1; returns
/// the run with the smallest fair cost and every trace.
MultiRestartResult multi_restart(const GroupedDataset& data, const DriverConfig& config,
                                 int restarts, std::uint64_t base_seed);

}  // namespace fairclust

#endif  // FAIRCLUST_DRIVER_HPP
