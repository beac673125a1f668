#ifndef FAIRCLUST_FAIR_CENTERS_HPP
#define FAIRCLUST_FAIR_CENTERS_HPP

#include <cstdint>
#include <vector>

#include "fairclust/coreset.hpp"
#include "fairclust/cost.hpp"
#include "fairclust/dataset.hpp"

namespace fairclust {

/// Weighted points of one (cluster, group) cell.
struct ProblemCell {
    Matrix pts;
    Vector w;
    int cluster = 0;
    int group = 0;
};

/// Fixed-partition min-max instance: find k centers minimizing
/// max_j (1/W_j) sum_i sum_{x in cell ij} w(x) ||x - c_i||^z.
/// The z = 2 path stores one CompressedGroup per group, so solve cost is
/// independent of the number of points.
struct FairCenterProblem {
    int k = 1;
    int d = 0;
    int groups = 0;
    double z = 2.0;
    Vector group_weights;                     // W_j
    std::vector<CompressedGroup> compressed;  // z = 2: one per group
    std::vector<ProblemCell> cells;           // z != 2: nonempty cells only
    std::vector<std::vector<int>> cells_of_group;
    CenterSet init;       // per-cluster pooled centroids
    double radius = 0.0;  // ball around init guaranteed to hold an optimum
};

FairCenterProblem make_problem(const GroupedDataset& data, const Partition& partition, double z);

/// Problem built from a tagged sample; every entry must carry a cluster tag.
FairCenterProblem make_problem(const GroupedDataset& parent, const WeightedSample& sample, int k,
                               double z);

/// Mean z-power cost of group j at the given centers (fixed assignment).
double group_mean_power(const FairCenterProblem& problem, const CenterSet& centers, int j);

/// Largest group mean z-power cost — the objective being minimized.
double max_group_mean_power(const FairCenterProblem& problem, const CenterSet& centers);

struct GroupEval {
    double value = 0.0;  // F_j = f_j - beta
    Matrix gradient;     // k x d, block i is d(F_j)/d(c_i)
};

/// F_j value and gradient at the given centers and beta. Gradient block i is
/// (z/W_j) sum_{x in cell ij} w(x) ||x - c_i||^(z-2) (c_i - x); points
/// coincident with their center contribute a zero subgradient.
GroupEval group_cost_and_gradient(const FairCenterProblem& problem, const CenterSet& centers,
                                  int j, double beta);

enum class SeparationStatus { feasible, infeasible, empty };

/// Feasibility answer for the constraint set {C : f_j(C) <= beta for all j}.
/// infeasible carries the gradient of the most-violated group (ties to the
/// lowest group index) as a separating hyperplane: feasible points C satisfy
/// <h, C> < <h, C'>. empty means that gradient vanished, certifying that no
/// centers satisfy the bound.
struct SeparationResult {
    SeparationStatus status = SeparationStatus::feasible;
    Matrix hyperplane;  // k x d, valid when infeasible
    int group = -1;
    double violation = 0.0;  // F_j of the reported group
};

SeparationResult separation_oracle(const FairCenterProblem& problem, const CenterSet& centers,
                                   double beta);

struct EllipsoidConfig {
    double beta_lo = 0.0;        // binary-search lower bound l0
    double beta_hi = -1.0;       // u0; negative means "evaluate the initial centers"
    double radius = 0.0;         // outer ball R; 0 means "use the problem radius"
    double inner_radius = 1e-7;  // r: feasible regions thinner than this may be missed
    double tol = 1e-6;           // stop when u - l <= tol * max(1, u0)
    int max_oracle_calls = 500000;
};

struct SubgradientConfig {
    int iterations = 4000;  // total budget across all stages
    int stages = 10;        // each stage restarts from the incumbent with a smaller step
    double eta0 = 0.0;      // initial step; 0 means "use the problem radius"
    double shrink = 0.6;    // per-stage step multiplier
    std::uint64_t seed = 0;  // carried into the solution for reporting
};

/// Binary search on beta; each probe runs central-cut ellipsoid feasibility
/// driven by separation_oracle. Returns the centers of the last feasible
/// probe; budget_exhausted is set when max_oracle_calls ran out first.
FairSolution solve_ellipsoid(const FairCenterProblem& problem, const EllipsoidConfig& config = {});

/// Projected subgradient descent on max_j f_j with normalized steps
/// eta_t = eta0 * shrink^s / sqrt(t), restarted from the best iterate at each
/// stage. Throws SolverError if the objective exceeds 1e12.
FairSolution solve_subgradient(const FairCenterProblem& problem,
                               const SubgradientConfig& config = {});

/// z = 2, single group: each center is the weighted mean of its cell.
CenterSet closed_form_single_group(const FairCenterProblem& problem);

}  // namespace fairclust

#endif  // FAIRCLUST_FAIR_CENTERS_HPP
