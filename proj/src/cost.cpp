#include "fairclust/cost.hpp"

#include <cmath>

#include "fairclust/errors.hpp"

namespace fairclust {

namespace {

// min over centers of squared distance, ties irrelevant (value only)
double nearest_center_sq(const CenterSet& centers, const Eigen::RowVectorXd& x) {
    double best = (centers.centers.row(0) - x).squaredNorm();
    for (Eigen::Index i = 1; i < centers.centers.rows(); ++i) {
        const double d2 = (centers.centers.row(i) - x).squaredNorm();
        if (d2 < best) best = d2;
    }
    return best;
}

double nearest_subspace_sq(const ProjectorSet& projectors, const Eigen::RowVectorXd& x) {
    double best = (x * projectors.basis[0]).squaredNorm();
    for (std::size_t i = 1; i < projectors.basis.size(); ++i) {
        const double d2 = (x * projectors.basis[i]).squaredNorm();
        if (d2 < best) best = d2;
    }
    return best;
}

double power_from_sq(double d2, double z) {
    if (z == 2.0) return d2;
    if (z == 1.0) return std::sqrt(d2);
    return std::pow(d2, 0.5 * z);
}

}  // namespace

double mean_power_cost(const CenterSet& centers, const Matrix& pts, const Vector& w, double z) {
    if (pts.rows() == 0) throw InputError("empty cost domain");
    double acc = 0.0, total = 0.0;
    for (Eigen::Index r = 0; r < pts.rows(); ++r) {
        acc += w[r] * power_from_sq(nearest_center_sq(centers, pts.row(r)), z);
        total += w[r];
    }
    return acc / total;
}

double clustering_cost(const CenterSet& centers, const Matrix& pts, const Vector& w, double z) {
    return std::pow(mean_power_cost(centers, pts, w, z), 1.0 / z);
}

FairCostResult fair_cost(const CenterSet& centers, const GroupedDataset& data, double z) {
    FairCostResult result;
    result.per_group = Vector::Zero(data.n_groups);
    Vector acc = Vector::Zero(data.n_groups);
    Vector total = Vector::Zero(data.n_groups);
    for (Eigen::Index r = 0; r < data.n(); ++r) {
        const int j = data.group_of[static_cast<std::size_t>(r)];
        acc[j] += data.weights[r] * power_from_sq(nearest_center_sq(centers, data.points.row(r)), z);
        total[j] += data.weights[r];
    }
    for (int j = 0; j < data.n_groups; ++j) {
        if (total[j] <= 0.0) throw InputError("empty cost domain");
        result.per_group[j] = std::pow(acc[j] / total[j], 1.0 / z);
    }
    result.fcost = result.per_group.maxCoeff();
    return result;
}

double mean_power_subspace_cost(const ProjectorSet& projectors, const Matrix& pts,
                                const Vector& w, double z) {
    if (projectors.mode != ProjectorMode::rounded) throw InputError("unrounded projector");
    if (pts.rows() == 0) throw InputError("empty cost domain");
    double acc = 0.0, total = 0.0;
    for (Eigen::Index r = 0; r < pts.rows(); ++r) {
        acc += w[r] * power_from_sq(nearest_subspace_sq(projectors, pts.row(r)), z);
        total += w[r];
    }
    return acc / total;
}

double subspace_cost(const ProjectorSet& projectors, const Matrix& pts, const Vector& w,
                     double z) {
    return std::pow(mean_power_subspace_cost(projectors, pts, w, z), 1.0 / z);
}

FairCostResult fair_subspace_cost(const ProjectorSet& projectors, const GroupedDataset& data,
                                  double z) {
    if (projectors.mode != ProjectorMode::rounded) throw InputError("unrounded projector");
    FairCostResult result;
    result.per_group = Vector::Zero(data.n_groups);
    Vector acc = Vector::Zero(data.n_groups);
    Vector total = Vector::Zero(data.n_groups);
    for (Eigen::Index r = 0; r < data.n(); ++r) {
        const int j = data.group_of[static_cast<std::size_t>(r)];
        acc[j] +=
            data.weights[r] * power_from_sq(nearest_subspace_sq(projectors, data.points.row(r)), z);
        total[j] += data.weights[r];
    }
    for (int j = 0; j < data.n_groups; ++j) {
        if (total[j] <= 0.0) throw InputError("empty cost domain");
        result.per_group[j] = std::pow(acc[j] / total[j], 1.0 / z);
    }
    result.fcost = result.per_group.maxCoeff();
    return result;
}

CompressedGroup compress_cells(const Matrix& pts, const Vector& w,
                               const std::vector<int>& cluster_of, int k) {
    const int d = static_cast<int>(pts.cols());
    CompressedGroup cg;
    cg.centroids = Matrix::Zero(k, d);
    cg.masses = Vector::Zero(k);

    for (Eigen::Index r = 0; r < pts.rows(); ++r) {
        const int i = cluster_of[static_cast<std::size_t>(r)];
        cg.masses[i] += w[r];
        cg.centroids.row(i) += w[r] * pts.row(r);
        cg.total_weight += w[r];
    }
    for (int i = 0; i < k; ++i)
        if (cg.masses[i] > 0.0) cg.centroids.row(i) /= cg.masses[i];

    for (Eigen::Index r = 0; r < pts.rows(); ++r) {
        const int i = cluster_of[static_cast<std::size_t>(r)];
        cg.scatter += w[r] * (pts.row(r) - cg.centroids.row(i)).squaredNorm();
    }
    return cg;
}

CompressedGroup compress_group(const GroupedDataset& data, const Partition& partition, int group,
                               double z) {
    if (z != 2.0) throw InputError("compression valid only for z=2");
    const std::vector<int> idx = data.group_indices(group);
    Matrix pts(idx.size(), data.dim());
    Vector w(idx.size());
    std::vector<int> cluster_of(idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r) {
        pts.row(static_cast<Eigen::Index>(r)) = data.points.row(idx[r]);
        w[static_cast<Eigen::Index>(r)] = data.weights[idx[r]];
        cluster_of[r] = partition.cluster_of[static_cast<std::size_t>(idx[r])];
    }
    return compress_cells(pts, w, cluster_of, partition.k);
}

double compressed_group_mean_power(const CompressedGroup& cg, const CenterSet& centers) {
    if (centers.k() != cg.k() || centers.dim() != cg.dim())
        throw InputError("compressed group / center set dimension mismatch");
    double acc = cg.scatter;
    for (int i = 0; i < cg.k(); ++i) {
        if (cg.masses[i] > 0.0)
            acc += cg.masses[i] * (cg.centroids.row(i) - centers.centers.row(i)).squaredNorm();
    }
    return acc / cg.total_weight;
}

double compressed_group_cost(const CompressedGroup& cg, const CenterSet& centers) {
    return std::sqrt(compressed_group_mean_power(cg, centers));
}

}  // namespace fairclust
