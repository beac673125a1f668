#include "fairclust/fair_subspace.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "fairclust/errors.hpp"
#include "fairclust/rng.hpp"

namespace fairclust {

namespace {

// flip so the first non-negligible component is positive; stabilizes
// eigenvector output across runs and libraries
void canonicalize_sign(Eigen::Ref<Vector> v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-12) {
            if (v[i] < 0.0) v = -v;
            return;
        }
    }
}

bool lex_greater(const Vector& a, const Vector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > 1e-12) return a[i] > b[i];
    }
    return false;
}

struct EigenPair {
    double value;
    Vector vector;
};

// eigenpairs sorted by eigenvalue descending, ties by lexicographically
// largest (sign-canonicalized) eigenvector first
std::vector<EigenPair> sorted_eigenpairs(const Matrix& sym) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
    std::vector<EigenPair> pairs;
    for (Eigen::Index i = 0; i < sym.rows(); ++i) {
        EigenPair p{eig.eigenvalues()[i], eig.eigenvectors().col(i)};
        canonicalize_sign(p.vector);
        pairs.push_back(std::move(p));
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const EigenPair& a, const EigenPair& b) {
        if (std::abs(a.value - b.value) > 1e-12) return a.value > b.value;
        return lex_greater(a.vector, b.vector);
    });
    return pairs;
}

// orthonormalize columns; throws on numerical rank deficiency
Matrix qr_basis(const Matrix& m) {
    Eigen::HouseholderQR<Matrix> qr(m);
    const Matrix r = qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
    const double scale = std::max(r.cwiseAbs().maxCoeff(), 1.0);
    for (Eigen::Index i = 0; i < m.cols(); ++i)
        if (std::abs(r(i, i)) < 1e-10 * scale)
            throw SolverError("rounding failed: fewer distinct directions than required");
    Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
    // fix column signs so the factorization is unique
    for (Eigen::Index i = 0; i < m.cols(); ++i)
        if (r(i, i) < 0.0) q.col(i) = -q.col(i);
    return q;
}

double stacked_norm(const std::vector<Matrix>& blocks) {
    double acc = 0.0;
    for (const auto& b : blocks) acc += b.squaredNorm();
    return std::sqrt(acc);
}

// most-violated group of the relaxation at beta = 0
std::pair<int, double> worst_relaxed_group(const FairSubspaceProblem& problem,
                                           const std::vector<Matrix>& zhat) {
    int worst = 0;
    double worst_value = relaxation_cost_oracle(problem, zhat, 0.0, 0).value;
    for (int j = 1; j < problem.groups; ++j) {
        const double v = relaxation_cost_oracle(problem, zhat, 0.0, j).value;
        if (v > worst_value) {
            worst_value = v;
            worst = j;
        }
    }
    return {worst, worst_value};
}

std::vector<Matrix> initial_zhat(const FairSubspaceProblem& problem) {
    const double fill = static_cast<double>(problem.d - problem.q) / problem.d;
    return std::vector<Matrix>(static_cast<std::size_t>(problem.k),
                               fill * Matrix::Identity(problem.d, problem.d));
}

SpectrahedronPoint solve_relaxation_subgradient(const FairSubspaceProblem& problem,
                                                const SubgradientConfig& config) {
    std::vector<Matrix> current = initial_zhat(problem);
    std::vector<Matrix> best = current;
    double best_value = worst_relaxed_group(problem, current).second;

    const double eta0 = config.eta0 > 0.0
                            ? config.eta0
                            : std::sqrt(static_cast<double>(problem.k) * problem.d);
    const int stages = std::max(config.stages, 1);
    const int per_stage = std::max(config.iterations / stages, 1);

    for (int s = 0; s < stages; ++s) {
        current = best;
        const double step0 = eta0 * std::pow(config.shrink, s);
        for (int t = 1; t <= per_stage; ++t) {
            const auto [j, value] = worst_relaxed_group(problem, current);
            if (value < best_value) {
                best_value = value;
                best = current;
            }
            const auto eval = relaxation_cost_oracle(problem, current, 0.0, j);
            const double norm = stacked_norm(eval.gradient);
            if (norm < 1e-15) break;
            const double step = step0 / std::sqrt(static_cast<double>(t)) / norm;
            for (int i = 0; i < problem.k; ++i)
                current[static_cast<std::size_t>(i)] = project_spectrahedron(
                    current[static_cast<std::size_t>(i)] -
                        step * eval.gradient[static_cast<std::size_t>(i)],
                    problem.q);
        }
        const double final_value = worst_relaxed_group(problem, current).second;
        if (final_value < best_value) {
            best_value = final_value;
            best = current;
        }
    }
    return {std::move(best), best_value};
}

// One structural-or-group cut for the stacked ellipsoid; returns false with a
// block hyperplane when the point violates some constraint at this beta.
bool relaxation_feasible_at(const FairSubspaceProblem& problem, const std::vector<Matrix>& zhat,
                            double beta, std::vector<Matrix>* cut) {
    const Matrix id = Matrix::Identity(problem.d, problem.d);
    for (int i = 0; i < problem.k; ++i) {
        const Matrix& z = zhat[static_cast<std::size_t>(i)];
        auto res = psd_separation_oracle(z);
        if (!res.ok) {
            (*cut)[static_cast<std::size_t>(i)] = res.hyperplane;
            return false;
        }
        res = psd_separation_oracle(id - z);
        if (!res.ok) {
            // hyperplane comes back in (I - Z)-space; flip into Z-space
            (*cut)[static_cast<std::size_t>(i)] = -res.hyperplane;
            return false;
        }
        res = trace_oracle(z, problem.q);
        if (!res.ok) {
            (*cut)[static_cast<std::size_t>(i)] = res.hyperplane;
            return false;
        }
    }
    int worst = -1;
    double worst_value = 0.0;
    for (int j = 0; j < problem.groups; ++j) {
        const double v = relaxation_cost_oracle(problem, zhat, beta, j).value;
        if (v > worst_value) {
            worst_value = v;
            worst = j;
        }
    }
    if (worst < 0) return true;
    *cut = relaxation_cost_oracle(problem, zhat, beta, worst).gradient;
    return false;
}

SpectrahedronPoint solve_relaxation_ellipsoid(const FairSubspaceProblem& problem,
                                              const EllipsoidConfig& config) {
    const int d = problem.d;
    const int m = problem.k * d * d;
    const double md = static_cast<double>(m);
    const double radius =
        config.radius > 0.0 ? config.radius : 2.0 * std::sqrt(static_cast<double>(problem.k) * d);

    const std::vector<Matrix> start = initial_zhat(problem);
    std::vector<Matrix> best = start;
    double best_value = worst_relaxed_group(problem, start).second;
    const double u0 = config.beta_hi >= 0.0 ? config.beta_hi : best_value;
    double lo = config.beta_lo, hi = std::max(u0, lo);

    const double ratio = std::max(radius / std::max(config.inner_radius, 1e-300), 2.0);
    const int cap = static_cast<int>(std::ceil(2.0 * md * (md + 1) * std::log(ratio))) + 2;

    auto unstack = [&](const Eigen::VectorXd& x) {
        std::vector<Matrix> zs;
        for (int i = 0; i < problem.k; ++i) {
            Matrix z(d, d);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) z(r, c) = x[(static_cast<Eigen::Index>(i) * d + r) * d + c];
            zs.push_back(std::move(z));
        }
        return zs;
    };
    auto stack = [&](const std::vector<Matrix>& zs) {
        Eigen::VectorXd x(m);
        for (int i = 0; i < problem.k; ++i)
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c)
                    x[(static_cast<Eigen::Index>(i) * d + r) * d + c] =
                        zs[static_cast<std::size_t>(i)](r, c);
        return x;
    };

    const Eigen::VectorXd center0 = stack(start);
    int calls = 0;
    bool found_any = false;
    while (hi - lo > config.tol * std::max(1.0, u0)) {
        if (calls + cap > config.max_oracle_calls) break;
        const double beta = 0.5 * (lo + hi);

        Eigen::VectorXd x = center0;
        Matrix A = radius * radius * Matrix::Identity(m, m);
        bool feasible = false;
        std::vector<Matrix> cut(static_cast<std::size_t>(problem.k), Matrix::Zero(d, d));
        for (int t = 0; t < cap; ++t) {
            auto zs = unstack(x);
            ++calls;
            for (auto& c : cut) c.setZero();
            if (relaxation_feasible_at(problem, zs, beta, &cut)) {
                for (auto& z : zs) z = 0.5 * (z + z.transpose());
                const double value = worst_relaxed_group(problem, zs).second;
                if (value < best_value || !found_any) {
                    best_value = value;
                    best = zs;
                }
                found_any = true;
                feasible = true;
                break;
            }
            const Eigen::VectorXd h = stack(cut);
            const Eigen::VectorXd Ah = A * h;
            const double hAh = h.dot(Ah);
            if (!(hAh > 0.0) || !std::isfinite(hAh)) break;
            const Eigen::VectorXd b = Ah / std::sqrt(hAh);
            x -= b / (md + 1.0);
            A = (md * md / (md * md - 1.0)) * (A - (2.0 / (md + 1.0)) * (b * b.transpose()));
            A = 0.5 * (A + A.transpose());
        }
        if (feasible)
            hi = std::min(beta, best_value);
        else
            lo = beta;
    }
    return {std::move(best), best_value};
}

// Euclidean gradient blocks of group j's rounded cost at the given bases
std::vector<Matrix> rounded_group_gradient(const FairSubspaceProblem& problem,
                                           const std::vector<Matrix>& bases, int j) {
    std::vector<Matrix> grad(static_cast<std::size_t>(problem.k),
                             Matrix::Zero(problem.d, problem.d - problem.q));
    const double wj = problem.group_weights[j];
    for (int ci : problem.cells_of_group[static_cast<std::size_t>(j)]) {
        const ProblemCell& cell = problem.cells[static_cast<std::size_t>(ci)];
        const std::size_t i = static_cast<std::size_t>(cell.cluster);
        if (problem.z == 2.0) {
            grad[i] += (2.0 / wj) *
                       (problem.cell_second_moment[static_cast<std::size_t>(ci)] * bases[i]);
            continue;
        }
        for (Eigen::Index r = 0; r < cell.pts.rows(); ++r) {
            const Eigen::RowVectorXd resid = cell.pts.row(r) * bases[i];
            const double dist = resid.norm();
            if (dist == 0.0) continue;
            grad[i] += (problem.z / wj) * cell.w[r] * std::pow(dist, problem.z - 2.0) *
                       (cell.pts.row(r).transpose() * resid);
        }
    }
    return grad;
}

// stage-restarted descent over products of orthonormal complement bases
void polish_bases(const FairSubspaceProblem& problem, std::vector<Matrix>* bases,
                  double* best_value, const SubspaceSolveConfig& config) {
    if (problem.q == 0 || problem.d == problem.q) return;  // nothing to move
    std::vector<Matrix> best = *bases;
    std::vector<Matrix> current = *bases;
    const int stages = std::max(config.polish_stages, 1);
    const int per_stage = std::max(config.polish_iterations / stages, 1);
    const double eta0 = 0.7;

    for (int s = 0; s < stages; ++s) {
        current = best;
        const double step0 = eta0 * std::pow(0.6, s);
        for (int t = 1; t <= per_stage; ++t) {
            int worst = 0;
            double value = subspace_group_mean_power(problem, current, 0);
            for (int j = 1; j < problem.groups; ++j) {
                const double v = subspace_group_mean_power(problem, current, j);
                if (v > value) {
                    value = v;
                    worst = j;
                }
            }
            if (value < *best_value) {
                *best_value = value;
                best = current;
            }
            const auto grad = rounded_group_gradient(problem, current, worst);
            const double norm = stacked_norm(grad);
            if (norm < 1e-15) break;
            const double step = step0 / std::sqrt(static_cast<double>(t)) / norm;
            bool ok = true;
            for (int i = 0; i < problem.k && ok; ++i) {
                try {
                    current[static_cast<std::size_t>(i)] =
                        qr_basis(current[static_cast<std::size_t>(i)] -
                                 step * grad[static_cast<std::size_t>(i)]);
                } catch (const SolverError&) {
                    ok = false;  // degenerate step; abandon the stage
                }
            }
            if (!ok) break;
        }
        double final_value = max_subspace_group_mean_power(problem, current);
        if (final_value < *best_value) {
            *best_value = final_value;
            best = current;
        }
    }
    *bases = best;
}

}  // namespace

FairSubspaceProblem make_subspace_problem(const GroupedDataset& data, const Partition& partition,
                                          int q, double z) {
    if (z < 1.0) throw InputError("z must be at least 1");
    if (q < 0 || q >= data.dim()) throw InputError("subspace dimension must be in [0, d)");
    if (partition.cluster_of.size() != static_cast<std::size_t>(data.n()))
        throw InputError("partition size does not match dataset");
    if (partition.k < 1) throw InputError("partition needs at least one cluster");
    for (int c : partition.cluster_of)
        if (c < 0 || c >= partition.k) throw InputError("cluster label out of range");

    FairSubspaceProblem p;
    p.k = partition.k;
    p.d = data.dim();
    p.groups = data.n_groups;
    p.q = q;
    p.z = z;
    p.group_weights = Vector::Zero(p.groups);
    for (Eigen::Index r = 0; r < data.n(); ++r)
        p.group_weights[data.group_of[static_cast<std::size_t>(r)]] += data.weights[r];
    for (int j = 0; j < p.groups; ++j)
        if (p.group_weights[j] <= 0.0) throw InputError("group without points");

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
            Matrix moment = Matrix::Zero(p.d, p.d);
            for (Eigen::Index r = 0; r < cell.pts.rows(); ++r)
                moment += cell.w[r] * (cell.pts.row(r).transpose() * cell.pts.row(r));
            p.cells_of_group[static_cast<std::size_t>(j)].push_back(
                static_cast<int>(p.cells.size()));
            p.cells.push_back(std::move(cell));
            p.cell_second_moment.push_back(std::move(moment));
        }
    }
    return p;
}

FairSubspaceProblem make_subspace_problem(const GroupedDataset& parent,
                                          const WeightedSample& sample, int k, int q, double z) {
    for (const auto& e : sample.entries)
        if (e.cluster < 0) throw InputError("sample entry missing cluster tag");
    GroupedDataset view = sample_dataset(parent, sample);
    Partition part;
    part.k = k;
    part.cluster_of.reserve(sample.size());
    for (const auto& e : sample.entries) part.cluster_of.push_back(e.cluster);
    return make_subspace_problem(view, part, q, z);
}

double subspace_group_mean_power(const FairSubspaceProblem& problem,
                                 const std::vector<Matrix>& bases, int j) {
    double acc = 0.0;
    for (int ci : problem.cells_of_group[static_cast<std::size_t>(j)]) {
        const ProblemCell& cell = problem.cells[static_cast<std::size_t>(ci)];
        const Matrix& basis = bases[static_cast<std::size_t>(cell.cluster)];
        if (problem.z == 2.0) {
            acc += (basis.transpose() *
                    problem.cell_second_moment[static_cast<std::size_t>(ci)] * basis)
                       .trace();
            continue;
        }
        for (Eigen::Index r = 0; r < cell.pts.rows(); ++r)
            acc += cell.w[r] * std::pow((cell.pts.row(r) * basis).norm(), problem.z);
    }
    return acc / problem.group_weights[j];
}

double max_subspace_group_mean_power(const FairSubspaceProblem& problem,
                                     const std::vector<Matrix>& bases) {
    double worst = 0.0;
    for (int j = 0; j < problem.groups; ++j)
        worst = std::max(worst, subspace_group_mean_power(problem, bases, j));
    return worst;
}

RelaxationEval relaxation_cost_oracle(const FairSubspaceProblem& problem,
                                      const std::vector<Matrix>& zhat, double beta, int j) {
    RelaxationEval out;
    out.gradient.assign(static_cast<std::size_t>(problem.k),
                        Matrix::Zero(problem.d, problem.d));
    const double wj = problem.group_weights[j];
    double acc = 0.0;
    for (int ci : problem.cells_of_group[static_cast<std::size_t>(j)]) {
        const ProblemCell& cell = problem.cells[static_cast<std::size_t>(ci)];
        const std::size_t i = static_cast<std::size_t>(cell.cluster);
        for (Eigen::Index r = 0; r < cell.pts.rows(); ++r) {
            const Eigen::RowVectorXd x = cell.pts.row(r);
            const double v = x * zhat[i] * x.transpose();
            acc += cell.w[r] * std::pow(std::abs(v), problem.z);
            double coef;
            if (problem.z == 1.0)
                coef = v < 0.0 ? -1.0 : 1.0;
            else
                coef = v == 0.0 ? 0.0
                                : problem.z * std::pow(std::abs(v), problem.z - 1.0) *
                                      (v < 0.0 ? -1.0 : 1.0);
            if (coef != 0.0)
                out.gradient[i] += (coef * cell.w[r] / wj) * (x.transpose() * x);
        }
    }
    out.value = acc / wj - beta;
    return out;
}

MatrixOracleResult psd_separation_oracle(const Matrix& m) {
    MatrixOracleResult res;
    // Case B: asymmetry is separated by an antisymmetric indicator, which is
    // orthogonal to every symmetric matrix
    double worst_gap = 1e-12;
    Eigen::Index br = -1, bc = -1;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = r + 1; c < m.cols(); ++c) {
            const double gap = std::abs(m(r, c) - m(c, r));
            if (gap > worst_gap) {
                worst_gap = gap;
                br = m(r, c) > m(c, r) ? r : c;
                bc = m(r, c) > m(c, r) ? c : r;
            }
        }
    }
    if (br >= 0) {
        res.ok = false;
        res.hyperplane = Matrix::Zero(m.rows(), m.cols());
        res.hyperplane(br, bc) = 1.0;
        res.hyperplane(bc, br) = -1.0;
        return res;
    }
    // Case A: a negative eigenvalue direction
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()));
    if (eig.eigenvalues()[0] < -1e-9) {
        const Vector v = eig.eigenvectors().col(0);
        res.ok = false;
        res.hyperplane = -(v * v.transpose());
        return res;
    }
    return res;
}

MatrixOracleResult trace_oracle(const Matrix& zhat, int q) {
    MatrixOracleResult res;
    const double needed = static_cast<double>(zhat.rows()) - q;
    if (zhat.trace() >= needed - 1e-9) return res;
    res.ok = false;
    res.hyperplane = -Matrix::Identity(zhat.rows(), zhat.cols());
    return res;
}

Matrix project_spectrahedron(const Matrix& m, int q) {
    const Eigen::Index d = m.rows();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (m + m.transpose()));
    Vector lam = eig.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);
    const double needed = static_cast<double>(d) - q;
    if (lam.sum() < needed - 1e-15) {
        // uniform raise of the clipped spectrum, capped at 1
        double lo = 0.0, hi = needed;
        for (int it = 0; it < 100; ++it) {
            const double tau = 0.5 * (lo + hi);
            const double total = lam.unaryExpr([&](double x) { return std::min(x + tau, 1.0); }).sum();
            if (total < needed)
                lo = tau;
            else
                hi = tau;
        }
        lam = lam.unaryExpr([&](double x) { return std::min(x + hi, 1.0); });
    }
    return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

SpectrahedronPoint solve_relaxation(const FairSubspaceProblem& problem,
                                    const RelaxationConfig& config) {
    return config.use_ellipsoid ? solve_relaxation_ellipsoid(problem, config.ellipsoid)
                                : solve_relaxation_subgradient(problem, config.subgradient);
}

ProjectorSet round_to_projectors(const SpectrahedronPoint& fractional, int q,
                                 std::uint64_t rng_seed, RoundingMode mode) {
    if (fractional.zhat.empty()) throw InputError("nothing to round");
    const Eigen::Index d = fractional.zhat[0].rows();
    const Eigen::Index keep = d - q;

    ProjectorSet out;
    out.mode = ProjectorMode::rounded;
    out.q = q;
    for (std::size_t i = 0; i < fractional.zhat.size(); ++i) {
        const Matrix sym =
            0.5 * (fractional.zhat[i] + fractional.zhat[i].transpose());
        if (mode == RoundingMode::deterministic) {
            const auto pairs = sorted_eigenpairs(sym);
            if (pairs[static_cast<std::size_t>(keep - 1)].value <= 1e-9)
                throw SolverError("rounding failed: fewer distinct directions than required");
            Matrix basis(d, keep);
            for (Eigen::Index c = 0; c < keep; ++c)
                basis.col(c) = pairs[static_cast<std::size_t>(c)].vector;
            out.basis.push_back(std::move(basis));
            continue;
        }
        // randomized: orthonormalized Gaussian sample shaped by Zhat^(1/2)
        Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
        const Matrix root = eig.eigenvectors() *
                            eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                            eig.eigenvectors().transpose();
        Rng rng(stream_seed(rng_seed, static_cast<std::uint64_t>(i)));
        Matrix g(d, keep);
        for (Eigen::Index r = 0; r < d; ++r)
            for (Eigen::Index c = 0; c < keep; ++c) g(r, c) = rng.normal();
        out.basis.push_back(qr_basis(root * g));
    }
    return out;
}

ProjectorSet pca_baseline(const GroupedDataset& data, int q) {
    if (q < 0 || q >= data.dim()) throw InputError("subspace dimension must be in [0, d)");
    Matrix moment = Matrix::Zero(data.dim(), data.dim());
    for (Eigen::Index r = 0; r < data.n(); ++r)
        moment += data.weights[r] * (data.points.row(r).transpose() * data.points.row(r));

    const auto pairs = sorted_eigenpairs(moment);
    const Eigen::Index keep = data.dim() - q;
    Matrix basis(data.dim(), keep);
    for (Eigen::Index c = 0; c < keep; ++c)
        basis.col(c) = pairs[static_cast<std::size_t>(q + c)].vector;  // bottom directions

    ProjectorSet out;
    out.mode = ProjectorMode::rounded;
    out.q = q;
    out.basis.push_back(std::move(basis));
    return out;
}

FairSolution solve_fair_subspace(const FairSubspaceProblem& problem,
                                 const SubspaceSolveConfig& config) {
    const SpectrahedronPoint relaxed = solve_relaxation(problem, config.relaxation);

    std::vector<std::vector<Matrix>> candidates;
    auto add_candidate = [&](ProjectorSet&& ps) { candidates.push_back(std::move(ps.basis)); };
    try {
        add_candidate(round_to_projectors(relaxed, problem.q));
    } catch (const SolverError&) {
    }
    for (int rdraw = 0; rdraw < config.random_roundings; ++rdraw) {
        try {
            add_candidate(round_to_projectors(relaxed, problem.q,
                                              stream_seed(config.seed, 1000 + rdraw),
                                              RoundingMode::randomized));
        } catch (const SolverError&) {
        }
    }

    // spectral candidates: per-cluster bottom directions of the pooled moment
    // and of each group's own moment
    const Eigen::Index keep = problem.d - problem.q;
    Matrix pooled_all = Matrix::Zero(problem.d, problem.d);
    for (const auto& mom : problem.cell_second_moment) pooled_all += mom;
    auto spectral_bases = [&](int group) {
        std::vector<Matrix> bases;
        for (int i = 0; i < problem.k; ++i) {
            Matrix moment = Matrix::Zero(problem.d, problem.d);
            bool any = false;
            for (std::size_t ci = 0; ci < problem.cells.size(); ++ci) {
                if (problem.cells[ci].cluster != i) continue;
                if (group >= 0 && problem.cells[ci].group != group) continue;
                moment += problem.cell_second_moment[ci];
                any = true;
            }
            if (!any) moment = pooled_all;
            const auto pairs = sorted_eigenpairs(moment);
            Matrix basis(problem.d, keep);
            for (Eigen::Index c = 0; c < keep; ++c)
                basis.col(c) = pairs[static_cast<std::size_t>(problem.q + c)].vector;
            bases.push_back(std::move(basis));
        }
        return bases;
    };
    candidates.push_back(spectral_bases(-1));
    for (int j = 0; j < problem.groups; ++j) candidates.push_back(spectral_bases(j));

    if (candidates.empty()) throw SolverError("no usable rounding produced");

    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t c = 0; c < candidates.size(); ++c)
        scored.emplace_back(max_subspace_group_mean_power(problem, candidates[c]), c);
    std::sort(scored.begin(), scored.end());

    // polish the few best candidates; descent can free a rounding stuck on a
    // flat face of the relaxation
    double best_value = scored[0].first;
    std::vector<Matrix> best = candidates[scored[0].second];
    const std::size_t tries = std::min<std::size_t>(3, scored.size());
    for (std::size_t c = 0; c < tries; ++c) {
        double value = scored[c].first;
        std::vector<Matrix> bases = candidates[scored[c].second];
        polish_bases(problem, &bases, &value, config);
        if (value < best_value) {
            best_value = value;
            best = std::move(bases);
        }
    }

    FairSolution sol;
    ProjectorSet ps;
    ps.mode = ProjectorMode::rounded;
    ps.q = problem.q;
    ps.basis = std::move(best);
    sol.projectors = std::move(ps);
    sol.beta = best_value;
    sol.per_group_cost = Vector::Zero(problem.groups);
    for (int j = 0; j < problem.groups; ++j)
        sol.per_group_cost[j] = std::pow(
            subspace_group_mean_power(problem, sol.projectors->basis, j), 1.0 / problem.z);
    sol.seed = config.seed;
    sol.params.k = problem.k;
    sol.params.z = problem.z;
    sol.params.q = problem.q;
    return sol;
}

}  // namespace fairclust
