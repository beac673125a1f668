#ifndef FAIRCLUST_FAIR_SUBSPACE_HPP
#define FAIRCLUST_FAIR_SUBSPACE_HPP

#include <cstdint>
#include <vector>

#include "fairclust/fair_centers.hpp"

namespace fairclust {

/// Fractional iterate of the subspace relaxation: one symmetric d x d matrix
/// per cluster with eigenvalues in [0,1] and trace >= d-q, plus the bound it
/// certifies.
struct SpectrahedronPoint {
    std::vector<Matrix> zhat;
    double beta = 0.0;
};

/// Fixed-partition subspace instance. Cell (i,j) points pair with subspace i;
/// the objective is max_j (1/W_j) sum_i sum_{x in cell ij} ||x^T Z_i||^z.
/// cell_second_moment holds sum_x w(x) x x^T per cell for the z=2 fast paths.
struct FairSubspaceProblem {
    int k = 1;
    int d = 0;
    int groups = 0;
    int q = 0;
    double z = 2.0;
    Vector group_weights;
    std::vector<ProblemCell> cells;
    std::vector<std::vector<int>> cells_of_group;
    std::vector<Matrix> cell_second_moment;
};

FairSubspaceProblem make_subspace_problem(const GroupedDataset& data, const Partition& partition,
                                          int q, double z);

FairSubspaceProblem make_subspace_problem(const GroupedDataset& parent,
                                          const WeightedSample& sample, int k, int q, double z);

/// Mean z-power residual of group j against rounded complement bases, cell
/// assignment fixed by the problem.
double subspace_group_mean_power(const FairSubspaceProblem& problem,
                                 const std::vector<Matrix>& bases, int j);

double max_subspace_group_mean_power(const FairSubspaceProblem& problem,
                                     const std::vector<Matrix>& bases);

/// Relaxed group cost: F_j = (1/W_j) sum_i sum_x w |x^T Zhat_i x|^z - beta,
/// with gradient block i = (z/W_j) sum_x w (x^T Zhat_i x)^(z-1) x x^T.
struct RelaxationEval {
    double value = 0.0;
    std::vector<Matrix> gradient;
};

RelaxationEval relaxation_cost_oracle(const FairSubspaceProblem& problem,
                                      const std::vector<Matrix>& zhat, double beta, int j);

/// Answer of a matrix-constraint oracle: ok, or a hyperplane h with
/// <h, feasible> < <h, query> for every feasible point.
struct MatrixOracleResult {
    bool ok = true;
    Matrix hyperplane;
};

/// PSD check. Symmetric input with an eigenvalue below -1e-9 yields -vv^T for
/// the most negative eigenvector v; input with an asymmetric entry pair
/// (beyond 1e-12) yields the antisymmetric indicator with +1 at the larger
/// entry and -1 at its mirror.
MatrixOracleResult psd_separation_oracle(const Matrix& m);

/// Trace bound check: ok iff Tr >= d - q - 1e-9, else the hyperplane -I.
MatrixOracleResult trace_oracle(const Matrix& zhat, int q);

/// Euclidean-style retraction onto {0 <= eigenvalues <= 1, Tr >= d-q}:
/// eigenvalues are clipped to [0,1], then uniformly raised (capped at 1) just
/// enough to reach the trace bound.
Matrix project_spectrahedron(const Matrix& m, int q);

struct RelaxationConfig {
    SubgradientConfig subgradient;  // default mode
    EllipsoidConfig ellipsoid;      // used when use_ellipsoid is set
    bool use_ellipsoid = false;
};

/// Minimize max_j of the relaxed group costs over the spectrahedron product.
/// Default: projected subgradient with stage restarts; optional ellipsoid
/// mode does binary search on beta with cuts from the PSD, trace, and group
/// oracles over the stacked (possibly asymmetric) matrix variables.
SpectrahedronPoint solve_relaxation(const FairSubspaceProblem& problem,
                                    const RelaxationConfig& config = {});

enum class RoundingMode { deterministic, randomized };

/// Rank-(d-q) complement bases from a fractional point. Deterministic mode
/// keeps the d-q largest-eigenvalue eigenvectors of each Zhat_i (ties broken
/// by sign-canonicalized lexicographic order); randomized mode orthonormalizes
/// Zhat_i^(1/2) G for a seeded Gaussian G. Throws SolverError when fewer than
/// d-q numerically distinct directions exist.
ProjectorSet round_to_projectors(const SpectrahedronPoint& fractional, int q,
                                 std::uint64_t rng_seed = 0,
                                 RoundingMode mode = RoundingMode::deterministic);

/// Group-blind optimum for k=1: complement = bottom d-q eigenvectors of the
/// pooled weighted second-moment matrix about the origin (linear subspaces,
/// no centering).
ProjectorSet pca_baseline(const GroupedDataset& data, int q);

struct SubspaceSolveConfig {
    RelaxationConfig relaxation;
    int random_roundings = 6;    // Gaussian rounding draws tried per solve
    int polish_iterations = 600; // manifold descent budget on the winner
    int polish_stages = 6;
    std::uint64_t seed = 0;
};

/// Full fixed-partition solve: relaxation, a candidate pool of roundings
/// (deterministic, randomized, and spectral baselines per group and pooled),
/// then manifold polish of the best candidate. beta in the result is the max
/// mean z-power cost achieved by the returned projectors.
FairSolution solve_fair_subspace(const FairSubspaceProblem& problem,
                                 const SubspaceSolveConfig& config = {});

}  // namespace fairclust

#endif  // FAIRCLUST_FAIR_SUBSPACE_HPP
