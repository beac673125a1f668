#include "fairclust/fair_centers.hpp"

#include <algorithm>
#include <cmath>

#include "fairclust/errors.hpp"

namespace fairclust {

namespace {

Eigen::VectorXd flatten(const Matrix& m) {
    Eigen::VectorXd v(m.size());
    Eigen::Index at = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) v[at++] = m(r, c);
    return v;
}

Matrix unflatten(const Eigen::VectorXd& v, int rows, int cols) {
    Matrix m(rows, cols);
    Eigen::Index at = 0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = v[at++];
    return m;
}

Matrix group_gradient(const FairCenterProblem& problem, const CenterSet& centers, int j) {
    Matrix g = Matrix::Zero(problem.k, problem.d);
    const double wj = problem.group_weights[j];
    if (problem.z == 2.0) {
        const CompressedGroup& cg = problem.compressed[static_cast<std::size_t>(j)];
        for (int i = 0; i < problem.k; ++i) {
            if (cg.masses[i] > 0.0)
                g.row(i) = (2.0 / wj) * cg.masses[i] *
                           (centers.centers.row(i) - cg.centroids.row(i));
        }
        return g;
    }
    for (int ci : problem.cells_of_group[static_cast<std::size_t>(j)]) {
        const ProblemCell& cell = problem.cells[static_cast<std::size_t>(ci)];
        const int i = cell.cluster;
        for (Eigen::Index r = 0; r < cell.pts.rows(); ++r) {
            const Eigen::RowVectorXd diff = centers.centers.row(i) - cell.pts.row(r);
            const double dist = diff.norm();
            if (dist == 0.0) continue;  // zero subgradient at the kink
            g.row(i) += cell.w[r] * std::pow(dist, problem.z - 2.0) * diff;
        }
    }
    return (problem.z / wj) * g;
}

struct Incumbent {
    CenterSet centers;
    double value = 0.0;
};

FairSolution finish_solution(const FairCenterProblem& problem, const Incumbent& best,
                             int iterations, bool budget) {
    FairSolution sol;
    sol.centers = best.centers;
    sol.beta = best.value;
    sol.per_group_cost = Vector::Zero(problem.groups);
    for (int j = 0; j < problem.groups; ++j)
        sol.per_group_cost[j] = std::pow(group_mean_power(problem, best.centers, j),
                                         1.0 / problem.z);
    sol.iterations = iterations;
    sol.budget_exhausted = budget;
    sol.params.k = problem.k;
    sol.params.z = problem.z;
    return sol;
}

// Single ellipsoid feasibility run at a fixed beta. Returns true with the
// witness written to `witness` when a feasible point was found within the
// iteration cap; `calls` accumulates oracle queries.
bool ellipsoid_feasible(const FairCenterProblem& problem, double beta,
                        const Eigen::VectorXd& center0, double radius, int cap, int* calls,
                        Eigen::VectorXd* witness) {
    const int m = static_cast<int>(center0.size());

    if (m == 1) {  // the ellipsoid degenerates to interval bisection
        double lo = center0[0] - radius, hi = center0[0] + radius;
        for (int t = 0; t < cap; ++t) {
            const double x = 0.5 * (lo + hi);
            Eigen::VectorXd xv(1);
            xv[0] = x;
            const auto res = separation_oracle(problem, {unflatten(xv, problem.k, problem.d)},
                                               beta);
            ++*calls;
            if (res.status == SeparationStatus::feasible) {
                *witness = xv;
                return true;
            }
            if (res.status == SeparationStatus::empty) return false;
            if (res.hyperplane(0, 0) > 0.0)
                hi = x;
            else
                lo = x;
        }
        return false;
    }

    Eigen::VectorXd x = center0;
    Matrix A = radius * radius * Matrix::Identity(m, m);
    const double md = static_cast<double>(m);

    for (int t = 0; t < cap; ++t) {
        const auto res = separation_oracle(problem, {unflatten(x, problem.k, problem.d)}, beta);
        ++*calls;
        if (res.status == SeparationStatus::feasible) {
            *witness = x;
            return true;
        }
        if (res.status == SeparationStatus::empty) return false;

        const Eigen::VectorXd h = flatten(res.hyperplane);
        const Eigen::VectorXd Ah = A * h;
        const double hAh = h.dot(Ah);
        if (!(hAh > 0.0) || !std::isfinite(hAh)) return false;  // collapsed ellipsoid

        const Eigen::VectorXd b = Ah / std::sqrt(hAh);
        x -= b / (md + 1.0);
        A = (md * md / (md * md - 1.0)) * (A - (2.0 / (md + 1.0)) * (b * b.transpose()));
        A = 0.5 * (A + A.transpose());
    }
    return false;
}

}  // namespace

FairCenterProblem make_problem(const GroupedDataset& data, const Partition& partition, double z) {
    if (z < 1.0) throw InputError("z must be at least 1");
    if (partition.cluster_of.size() != static_cast<std::size_t>(data.n()))
        throw InputError("partition size does not match dataset");
    if (partition.k < 1) throw InputError("partition needs at least one cluster");
    for (int c : partition.cluster_of)
        if (c < 0 || c >= partition.k) throw InputError("cluster label out of range");

    FairCenterProblem p;
    p.k = partition.k;
    p.d = data.dim();
    p.groups = data.n_groups;
    p.z = z;
    p.group_weights = Vector::Zero(p.groups);
    for (Eigen::Index r = 0; r < data.n(); ++r)
        p.group_weights[data.group_of[static_cast<std::size_t>(r)]] += data.weights[r];
    for (int j = 0; j < p.groups; ++j)
        if (p.group_weights[j] <= 0.0) throw InputError("group without points");

    // pooled centroid, per-cluster centroids, and the search radius
    const double total = data.weights.sum();
    Eigen::RowVectorXd pooled = (data.weights.transpose() * data.points) / total;
    Matrix cluster_sum = Matrix::Zero(p.k, p.d);
    Vector cluster_mass = Vector::Zero(p.k);
    for (Eigen::Index r = 0; r < data.n(); ++r) {
        const int i = partition.cluster_of[static_cast<std::size_t>(r)];
        cluster_sum.row(i) += data.weights[r] * data.points.row(r);
        cluster_mass[i] += data.weights[r];
    }
    p.init.centers = Matrix(p.k, p.d);
    for (int i = 0; i < p.k; ++i)
        p.init.centers.row(i) = cluster_mass[i] > 0.0
                                    ? (cluster_sum.row(i) / cluster_mass[i]).eval()
                                    : pooled;
    double maxdist = 0.0;
    for (Eigen::Index r = 0; r < data.n(); ++r)
        maxdist = std::max(maxdist, (data.points.row(r) - pooled).norm());
    p.radius = 2.0 * std::sqrt(static_cast<double>(p.k)) * maxdist;

    if (z == 2.0) {
        for (int j = 0; j < p.groups; ++j) p.compressed.push_back(compress_group(data, partition, j));
        return p;
    }

    p.cells_of_group.resize(static_cast<std::size_t>(p.groups));
    for (int i = 0; i < p.k; ++i) {
        for (int j = 0; j < p.groups; ++j) {
            std::vector<int> rows;
            for (Eigen::Index r = 0; r < data.n(); ++r)
                if (partition.cluster_of[static_cast<std::size_t>(r)] == i &&
                    data.group_of[static_cast<std::size_t>(r)] == j)
                    rows.push_back(static_cast<int>(r));
            if (rows.empty()) continue;
            ProblemCell cell;
            cell.cluster = i;
            cell.group = j;
            cell.pts = Matrix(rows.size(), p.d);
            cell.w = Vector(rows.size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
                cell.pts.row(static_cast<Eigen::Index>(r)) = data.points.row(rows[r]);
                cell.w[static_cast<Eigen::Index>(r)] = data.weights[rows[r]];
            }
            p.cells_of_group[static_cast<std::size_t>(j)].push_back(
                static_cast<int>(p.cells.size()));
            p.cells.push_back(std::move(cell));
        }
    }
    return p;
}

FairCenterProblem make_problem(const GroupedDataset& parent, const WeightedSample& sample, int k,
                               double z) {
    for (const auto& e : sample.entries)
        if (e.cluster < 0) throw InputError("sample entry missing cluster tag");
    GroupedDataset view = sample_dataset(parent, sample);
    Partition part;
    part.k = k;
    part.cluster_of.reserve(sample.size());
    for (const auto& e : sample.entries) part.cluster_of.push_back(e.cluster);
    return make_problem(view, part, z);
}

double group_mean_power(const FairCenterProblem& problem, const CenterSet& centers, int j) {
    if (problem.z == 2.0)
        return compressed_group_mean_power(problem.compressed[static_cast<std::size_t>(j)],
                                           centers);
    double acc = 0.0;
    for (int ci : problem.cells_of_group[static_cast<std::size_t>(j)]) {
        const ProblemCell& cell = problem.cells[static_cast<std::size_t>(ci)];
        for (Eigen::Index r = 0; r < cell.pts.rows(); ++r)
            acc += cell.w[r] *
                   std::pow((centers.centers.row(cell.cluster) - cell.pts.row(r)).norm(),
                            problem.z);
    }
    return acc / problem.group_weights[j];
}

double max_group_mean_power(const FairCenterProblem& problem, const CenterSet& centers) {
    double worst = 0.0;
    for (int j = 0; j < problem.groups; ++j)
        worst = std::max(worst, group_mean_power(problem, centers, j));
    return worst;
}

GroupEval group_cost_and_gradient(const FairCenterProblem& problem, const CenterSet& centers,
                                  int j, double beta) {
    GroupEval out;
    out.value = group_mean_power(problem, centers, j) - beta;
    out.gradient = group_gradient(problem, centers, j);
    return out;
}

SeparationResult separation_oracle(const FairCenterProblem& problem, const CenterSet& centers,
                                   double beta) {
    int worst = 0;
    double worst_value = group_mean_power(problem, centers, 0);
    for (int j = 1; j < problem.groups; ++j) {
        const double v = group_mean_power(problem, centers, j);
        if (v > worst_value) {
            worst_value = v;
            worst = j;
        }
    }

    SeparationResult res;
    res.group = worst;
    res.violation = worst_value - beta;
    if (res.violation <= 0.0) {
        res.status = SeparationStatus::feasible;
        return res;
    }
    res.hyperplane = group_gradient(problem, centers, worst);
    if (res.hyperplane.cwiseAbs().maxCoeff() <= 1e-14) {
        // the most-violated group is at its unconstrained minimum: no centers
        // can reach this beta
        res.status = SeparationStatus::empty;
        return res;
    }
    res.status = SeparationStatus::infeasible;
    return res;
}

FairSolution solve_ellipsoid(const FairCenterProblem& problem, const EllipsoidConfig& config) {
    const int m = problem.k * problem.d;
    const double radius = std::max(config.radius > 0.0 ? config.radius : problem.radius, 1e-12);
    const Eigen::VectorXd center0 = flatten(problem.init.centers);

    Incumbent best{problem.init, max_group_mean_power(problem, problem.init)};
    const double u0 = config.beta_hi >= 0.0 ? config.beta_hi : best.value;
    double lo = config.beta_lo;
    double hi = std::max(u0, lo);

    // iteration cap per feasibility probe from the volume-shrink argument
    const double ratio = std::max(radius / std::max(config.inner_radius, 1e-300), 2.0);
    const int cap = m == 1
                        ? static_cast<int>(std::ceil(std::log2(ratio))) + 2
                        : static_cast<int>(std::ceil(2.0 * m * (m + 1) * std::log(ratio))) + 2;

    int calls = 0;
    bool budget = false;
    while (hi - lo > config.tol * std::max(1.0, u0)) {
        if (calls + cap > config.max_oracle_calls) {
            budget = true;
            break;
        }
        const double beta = 0.5 * (lo + hi);
        Eigen::VectorXd witness;
        if (ellipsoid_feasible(problem, beta, center0, radius, cap, &calls, &witness)) {
            CenterSet found{unflatten(witness, problem.k, problem.d)};
            const double value = max_group_mean_power(problem, found);
            if (value < best.value) best = {std::move(found), value};
            hi = std::min(beta, value);
        } else {
            lo = beta;
        }
    }
    return finish_solution(problem, best, calls, budget);
}

FairSolution solve_subgradient(const FairCenterProblem& problem, const SubgradientConfig& config) {
    if (config.iterations < 1) throw InputError("iteration budget must be positive");
    const double eta0 = std::max(config.eta0 > 0.0 ? config.eta0 : problem.radius, 1e-12);
    const Eigen::VectorXd center0 = flatten(problem.init.centers);
    const double radius = std::max(problem.radius, 1e-12);

    Incumbent best{problem.init, max_group_mean_power(problem, problem.init)};
    const int stages = std::max(config.stages, 1);
    const int per_stage = std::max(config.iterations / stages, 1);
    int used = 0;

    for (int s = 0; s < stages; ++s) {
        CenterSet current = best.centers;
        const double step0 = eta0 * std::pow(config.shrink, s);
        for (int t = 1; t <= per_stage; ++t) {
            const auto res = separation_oracle(problem, current, 0.0);
            ++used;
            if (res.violation < best.value) best = {current, res.violation};
            if (res.violation > 1e12) throw SolverError("subgradient diverged");
            if (res.status != SeparationStatus::infeasible) break;  // zero gradient

            const double norm = res.hyperplane.norm();
            current.centers -= (step0 / std::sqrt(static_cast<double>(t)) / norm) *
                               res.hyperplane;

            // safety ball: optima live within `radius` of the initial centers
            Eigen::VectorXd flat = flatten(current.centers);
            const double dist = (flat - center0).norm();
            if (dist > radius) {
                flat = center0 + (radius / dist) * (flat - center0);
                current.centers = unflatten(flat, problem.k, problem.d);
            }
        }
        const double final_value = max_group_mean_power(problem, current);
        if (final_value < best.value) best = {std::move(current), final_value};
    }

    FairSolution sol = finish_solution(problem, best, used, false);
    sol.seed = config.seed;
    return sol;
}

CenterSet closed_form_single_group(const FairCenterProblem& problem) {
    if (problem.groups != 1) throw InputError("closed form requires a single group");
    if (problem.z != 2.0) throw InputError("closed form requires z = 2");
    const CompressedGroup& cg = problem.compressed[0];
    CenterSet c;
    c.centers = Matrix(problem.k, problem.d);
    for (int i = 0; i < problem.k; ++i)
        c.centers.row(i) = cg.masses[i] > 0.0 ? cg.centroids.row(i) : problem.init.centers.row(i);
    return c;
}

}  // namespace fairclust
