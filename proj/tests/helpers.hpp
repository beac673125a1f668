#ifndef FAIRCLUST_TESTS_HELPERS_HPP
#define FAIRCLUST_TESTS_HELPERS_HPP

#include <functional>
#include <initializer_list>
#include <vector>

#include "fairclust/dataset.hpp"
#include "fairclust/rng.hpp"

namespace testutil {

using fairclust::GroupedDataset;
using fairclust::Matrix;
using fairclust::Vector;

inline Matrix make_points(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return m;
}

inline GroupedDataset make_dataset(Matrix pts, std::vector<int> groups, Vector weights = {}) {
    GroupedDataset d;
    d.points = std::move(pts);
    d.weights = weights.size() ? std::move(weights) : Vector::Ones(d.points.rows()).eval();
    d.group_of = std::move(groups);
    int ng = 0;
    for (int g : d.group_of) ng = std::max(ng, g + 1);
    d.n_groups = ng;
    return d;
}

// 1-D convenience: one coordinate per point
inline GroupedDataset make_dataset_1d(std::vector<double> xs, std::vector<int> groups,
                                      Vector weights = {}) {
    Matrix pts(static_cast<Eigen::Index>(xs.size()), 1);
    for (std::size_t i = 0; i < xs.size(); ++i) pts(static_cast<Eigen::Index>(i), 0) = xs[i];
    return make_dataset(std::move(pts), std::move(groups), std::move(weights));
}

// Random instance with unit weights, points uniform in [-1, 1]^d. Every group
// is nonempty because the first n_groups points get labels 0..n_groups-1.
inline GroupedDataset random_instance(fairclust::Rng& rng, int n, int d, int n_groups) {
    Matrix pts(n, d);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < d; ++c) pts(r, c) = rng.uniform(-1.0, 1.0);
    std::vector<int> groups(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r)
        groups[static_cast<std::size_t>(r)] = r < n_groups ? r : rng.index(n_groups);
    return make_dataset(std::move(pts), std::move(groups));
}

// Dense scan minimum of f over [lo, hi] with the given step.
inline double grid_min_1d(const std::function<double(double)>& f, double lo, double hi,
                          double step) {
    double best = f(lo);
    for (double x = lo + step; x <= hi + step * 0.5; x += step) best = std::min(best, f(x));
    return best;
}

inline double grid_min_2d(const std::function<double(double, double)>& f, double lo, double hi,
                          double step) {
    double best = f(lo, lo);
    for (double x = lo; x <= hi + step * 0.5; x += step)
        for (double y = lo; y <= hi + step * 0.5; y += step) best = std::min(best, f(x, y));
    return best;
}

}  // namespace testutil

#endif  // FAIRCLUST_TESTS_HELPERS_HPP
