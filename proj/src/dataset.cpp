#include "fairclust/dataset.hpp"

#include <cmath>

namespace fairclust {

std::vector<std::string> validate(const GroupedDataset& data) {
    std::vector<std::string> violations;
    const Eigen::Index n = data.n();

    if (data.weights.size() != n)
        violations.push_back("weights size " + std::to_string(data.weights.size()) +
                             " does not match point count " + std::to_string(n));
    if (static_cast<Eigen::Index>(data.group_of.size()) != n)
        violations.push_back("group_of size " + std::to_string(data.group_of.size()) +
                             " does not match point count " + std::to_string(n));
    if (data.n_groups < 1) violations.push_back("n_groups not positive");

    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index c = 0; c < data.points.cols(); ++c) {
            if (!std::isfinite(data.points(i, c))) {
                violations.push_back("points[" + std::to_string(i) + "][" + std::to_string(c) +
                                     "] not finite");
                break;  // one violation per row is enough to act on
            }
        }
    }
    for (Eigen::Index i = 0; i < data.weights.size() && i < n; ++i) {
        if (!(data.weights[i] > 0.0) || !std::isfinite(data.weights[i]))
            violations.push_back("weights[" + std::to_string(i) + "] not positive");
    }

    std::vector<bool> seen(static_cast<std::size_t>(std::max(data.n_groups, 0)), false);
    for (std::size_t i = 0; i < data.group_of.size(); ++i) {
        const int g = data.group_of[i];
        if (g < 0 || g >= data.n_groups)
            violations.push_back("group_of[" + std::to_string(i) + "] out of range");
        else
            seen[static_cast<std::size_t>(g)] = true;
    }
    for (int j = 0; j < data.n_groups; ++j)
        if (!seen[static_cast<std::size_t>(j)])
            violations.push_back("group[" + std::to_string(j) + "] empty");

    return violations;
}

std::vector<std::string> validate(const ProjectorSet& projectors) {
    std::vector<std::string> violations;
    const int d = projectors.dim();
    if (projectors.mode == ProjectorMode::rounded) {
        for (std::size_t i = 0; i < projectors.basis.size(); ++i) {
            const Matrix& Z = projectors.basis[i];
            if (Z.rows() != d || Z.cols() != d - projectors.q) {
                violations.push_back("basis[" + std::to_string(i) + "] has wrong shape");
                continue;
            }
            const Matrix gram = Z.transpose() * Z;
            const double err =
                (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
            if (err > 1e-9)
                violations.push_back("basis[" + std::to_string(i) + "] columns not orthonormal");
        }
    } else {
        for (std::size_t i = 0; i < projectors.zhat.size(); ++i) {
            const Matrix& Z = projectors.zhat[i];
            if (Z.rows() != d || Z.cols() != d) {
                violations.push_back("zhat[" + std::to_string(i) + "] not square");
                continue;
            }
            if ((Z - Z.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
                violations.push_back("zhat[" + std::to_string(i) + "] not symmetric");
                continue;
            }
            Eigen::SelfAdjointEigenSolver<Matrix> eig(Z);
            const Vector& ev = eig.eigenvalues();
            if (ev.minCoeff() < -1e-7 || ev.maxCoeff() > 1.0 + 1e-7)
                violations.push_back("zhat[" + std::to_string(i) + "] eigenvalues outside [0,1]");
            if (Z.trace() < d - projectors.q - 1e-7)
                violations.push_back("zhat[" + std::to_string(i) + "] trace below d-q");
        }
    }
    return violations;
}

}  // namespace fairclust
