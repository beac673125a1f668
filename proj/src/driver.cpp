#include "fairclust/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "fairclust/cost.hpp"
#include "fairclust/errors.hpp"
#include "fairclust/rng.hpp"

namespace fairclust {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// nearest assignment by squared distance, then reseed empty clusters with the
// heaviest fair-cost contributors
template <typename Dist2>
Partition assign_by_distance(const GroupedDataset& data, int k, double z, Dist2&& dist2) {
    const Eigen::Index n = data.n();
    Partition part;
    part.k = k;
    part.cluster_of.resize(static_cast<std::size_t>(n));
    Vector best_d2(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        int best = 0;
        double bd = dist2(r, 0);
        for (int i = 1; i < k; ++i) {
            const double v = dist2(r, i);
            if (v < bd) {
                bd = v;
                best = i;
            }
        }
        part.cluster_of[static_cast<std::size_t>(r)] = best;
        best_d2[r] = bd;
    }

    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (int c : part.cluster_of) ++count[static_cast<std::size_t>(c)];
    Vector group_w(data.n_groups);
    for (int j = 0; j < data.n_groups; ++j) group_w[j] = data.group_weight(j);

    for (int i = 0; i < k; ++i) {
        if (count[static_cast<std::size_t>(i)] > 0) continue;
        Eigen::Index pick = -1;
        double pick_value = -1.0;
        for (Eigen::Index r = 0; r < n; ++r) {
            if (count[static_cast<std::size_t>(part.cluster_of[static_cast<std::size_t>(r)])] < 2)
                continue;
            const double contribution = data.weights[r] * std::pow(best_d2[r], 0.5 * z) /
                                        group_w[data.group_of[static_cast<std::size_t>(r)]];
            if (contribution > pick_value) {
                pick_value = contribution;
                pick = r;
            }
        }
        if (pick < 0) continue;  // not enough points to fill every cluster
        --count[static_cast<std::size_t>(part.cluster_of[static_cast<std::size_t>(pick)])];
        part.cluster_of[static_cast<std::size_t>(pick)] = i;
        count[static_cast<std::size_t>(i)] = 1;
        best_d2[pick] = 0.0;  // it seeds the cluster
    }
    return part;
}

// replaces the sample-based costs with ones recomputed on the full dataset
void rescore_on_full(FairSolution* sol, const GroupedDataset& data, double z) {
    const FairCostResult fc = sol->centers ? fair_cost(*sol->centers, data, z)
                                           : fair_subspace_cost(*sol->projectors, data, z);
    sol->per_group_cost = fc.per_group;
    sol->beta = std::pow(fc.fcost, z);
}

FairSolution solve_center_cells(const FairCenterProblem& problem, const DriverConfig& config,
                                std::uint64_t solver_seed) {
    if (problem.groups == 1 && problem.z == 2.0) {
        FairSolution sol;
        sol.centers = closed_form_single_group(problem);
        const double power = max_group_mean_power(problem, *sol.centers);
        sol.beta = power;
        sol.per_group_cost = Vector::Constant(1, std::sqrt(power));
        sol.params.k = problem.k;
        sol.params.z = problem.z;
        return sol;
    }
    if (config.use_ellipsoid) return solve_ellipsoid(problem, config.ellipsoid);
    SubgradientConfig sub = config.subgradient;
    sub.seed = solver_seed;
    return solve_subgradient(problem, sub);
}

// one fixed-partition solve on the representative set named by the sample
FairSolution solve_representative(const GroupedDataset& data, const WeightedSample& sample,
                                  const DriverConfig& config, std::uint64_t solver_seed) {
    if (config.objective == ObjectiveKind::centers) {
        const auto problem = make_problem(data, sample, config.k, config.z);
        return solve_center_cells(problem, config, solver_seed);
    }
    const auto problem = make_subspace_problem(data, sample, config.k, config.q, config.z);
    SubspaceSolveConfig sub = config.subspace;
    sub.seed = solver_seed;
    return solve_fair_subspace(problem, sub);
}

}  // namespace

Partition assign_points(const GroupedDataset& data, const CenterSet& centers, double z) {
    return assign_by_distance(data, centers.k(), z, [&](Eigen::Index r, int i) {
        return (data.points.row(r) - centers.centers.row(i)).squaredNorm();
    });
}

Partition assign_points(const GroupedDataset& data, const ProjectorSet& projectors, double z) {
    if (projectors.mode != ProjectorMode::rounded)
        throw InputError("assignment needs rounded projectors");
    return assign_by_distance(
        data, static_cast<int>(projectors.basis.size()), z, [&](Eigen::Index r, int i) {
            return (data.points.row(r) * projectors.basis[static_cast<std::size_t>(i)])
                .squaredNorm();
        });
}

LloydResult lloyd_fair(const GroupedDataset& data, const DriverConfig& config) {
    if (config.k < 1) throw InputError("k must be positive");
    if (config.iterations < 1) throw InputError("iteration budget must be positive");
    if (config.samples < 1) throw InputError("sample size must be positive");

    const auto start = Clock::now();
    Rng init_rng(stream_seed(config.seed));
    Partition part;
    part.k = config.k;
    part.cluster_of.resize(static_cast<std::size_t>(data.n()));
    for (auto& c : part.cluster_of) c = init_rng.index(config.k);

    LloydResult out;
    out.trace.seed = config.seed;
    double best_f = std::numeric_limits<double>::infinity();
    double prev_f = std::numeric_limits<double>::infinity();
    int slow_steps = 0;

    for (int t = 0; t < config.iterations; ++t) {
        FairSolution iterate;
        try {
            if (config.objective == ObjectiveKind::centers && config.z == 2.0) {
                // exact per-cell compression; no sampling error
                const auto problem = make_problem(data, part, config.z);
                iterate = solve_center_cells(problem, config, stream_seed(config.seed, 2, t));
            } else {
                const auto sample =
                    uniform_cell_sample(data, part, config.samples, stream_seed(config.seed, 1, t));
                iterate = solve_representative(data, sample, config, stream_seed(config.seed, 2, t));
            }
        } catch (const SolverError& err) {
            throw SolverError("iteration " + std::to_string(t) + ": " + err.what());
        }

        const FairCostResult full = iterate.centers
                                        ? fair_cost(*iterate.centers, data, config.z)
                                        : fair_subspace_cost(*iterate.projectors, data, config.z);
        out.trace.iterations.push_back({full.fcost, full.per_group, seconds_since(start)});
        if (full.fcost < best_f) {
            best_f = full.fcost;
            out.trace.best_index = t;
            out.solution = iterate;
            rescore_on_full(&out.solution, data, config.z);
        }

        part = iterate.centers ? assign_points(data, *iterate.centers, config.z)
                               : assign_points(data, *iterate.projectors, config.z);

        if (std::abs(full.fcost - prev_f) < 1e-6 * std::max(1.0, prev_f))
            ++slow_steps;
        else
            slow_steps = 0;
        prev_f = full.fcost;
        if (slow_steps >= 3) break;
    }

    out.solution.iterations = static_cast<int>(out.trace.iterations.size());
    out.solution.seed = config.seed;
    out.solution.params.k = config.k;
    out.solution.params.z = config.z;
    out.solution.params.q = config.objective == ObjectiveKind::subspaces ? config.q : 0;
    out.solution.params.samples = config.samples;
    out.solution.params.iters = config.iterations;
    return out;
}

void for_each_labeling(int n, int k, const std::function<void(const std::vector<int>&)>& visit) {
    if (n <= 0 || k <= 0) return;
    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> descend = [&](int i, int used) {
        if (i == n) {
            visit(labels);
            return;
        }
        const int top = std::min(used, k - 1);
        for (int c = 0; c <= top; ++c) {
            labels[static_cast<std::size_t>(i)] = c;
            descend(i + 1, std::max(used, c + 1));
        }
    };
    descend(0, 0);
}

std::uint64_t labeling_count(int n, int k) {
    if (n <= 0 || k <= 0) return 0;
    // Stirling numbers of the second kind, summed over 1..k parts
    std::vector<std::uint64_t> row(static_cast<std::size_t>(k) + 1, 0);
    row[1] = 1;
    for (int i = 2; i <= n; ++i)
        for (int m = std::min(i, k); m >= 1; --m)
            row[static_cast<std::size_t>(m)] = static_cast<std::uint64_t>(m) * row[static_cast<std::size_t>(m)] +
                                               (m > 1 ? row[static_cast<std::size_t>(m - 1)] : 0);
    std::uint64_t total = 0;
    for (int m = 1; m <= k; ++m) total += row[static_cast<std::size_t>(m)];
    return total;
}

FairSolution exhaustive_framework(const WeightedSample& coreset, const GroupedDataset& data,
                                  const DriverConfig& config) {
    const int n = static_cast<int>(coreset.size());
    if (n < 1) throw InputError("empty coreset");
    if (config.k < 1) throw InputError("k must be positive");
    if (n * std::log(static_cast<double>(config.k)) > std::log(1e7) + 1e-9)
        throw InputError("instance too large for exhaustive mode");

    FairSolution best;
    double best_t = std::numeric_limits<double>::infinity();
    std::uint64_t visited = 0;
    WeightedSample tagged = coreset;
    for_each_labeling(n, config.k, [&](const std::vector<int>& labels) {
        for (int i = 0; i < n; ++i) tagged.entries[static_cast<std::size_t>(i)].cluster = labels[i];
        FairSolution sol =
            solve_representative(data, tagged, config, stream_seed(config.seed, 3, visited));
        ++visited;
        const double t_value = sol.fcost();  // max per-group cost on the coreset
        if (t_value < best_t) {
            best_t = t_value;
            best = std::move(sol);
        }
    });

    rescore_on_full(&best, data, config.z);
    best.iterations = static_cast<int>(visited);
    best.seed = config.seed;
    best.params.k = config.k;
    best.params.z = config.z;
    best.params.q = config.objective == ObjectiveKind::subspaces ? config.q : 0;
    best.params.samples = n;
    best.params.iters = static_cast<int>(visited);
    return best;
}

MultiRestartResult multi_restart(const GroupedDataset& data, const DriverConfig& config,
                                 int restarts, std::uint64_t base_seed) {
    if (restarts < 1) throw InputError("restarts must be positive");
    MultiRestartResult out;
    double best_f = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        DriverConfig run = config;
        run.seed = base_seed + static_cast<std::uint64_t>(r);
        LloydResult result = lloyd_fair(data, run);
        if (result.solution.fcost() < best_f) {
            best_f = result.solution.fcost();
            out.best = result.solution;
        }
        out.traces.push_back(std::move(result.trace));
    }
    return out;
}

}  // namespace fairclust
