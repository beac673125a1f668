#include "fairclust/coreset.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fairclust/cost.hpp"
#include "fairclust/errors.hpp"
#include "fairclust/rng.hpp"

namespace fairclust {

WeightedSample uniform_cell_sample(const GroupedDataset& data, const Partition& partition, int M,
                                   std::uint64_t rng_seed) {
    if (M < 1) throw InputError("sample size must be at least 1");

    // bucket parent rows by cell
    std::vector<std::vector<int>> cell(
        static_cast<std::size_t>(partition.k) * static_cast<std::size_t>(data.n_groups));
    for (Eigen::Index r = 0; r < data.n(); ++r) {
        const int i = partition.cluster_of[static_cast<std::size_t>(r)];
        const int j = data.group_of[static_cast<std::size_t>(r)];
        cell[static_cast<std::size_t>(i) * data.n_groups + j].push_back(static_cast<int>(r));
    }

    WeightedSample out;
    for (int i = 0; i < partition.k; ++i) {
        for (int j = 0; j < data.n_groups; ++j) {
            auto& rows = cell[static_cast<std::size_t>(i) * data.n_groups + j];
            if (rows.empty()) continue;
            if (static_cast<int>(rows.size()) <= M) {
                for (int r : rows) out.entries.push_back({r, data.weights[r], i, j});
                continue;
            }
            double cell_weight = 0.0;
            for (int r : rows) cell_weight += data.weights[r];

            Rng rng(stream_seed(rng_seed, static_cast<std::uint64_t>(i),
                                static_cast<std::uint64_t>(j)));
            // partial Fisher-Yates: the first M slots become the sample
            for (int t = 0; t < M; ++t) {
                const int swap_with = t + rng.index(static_cast<int>(rows.size()) - t);
                std::swap(rows[static_cast<std::size_t>(t)],
                          rows[static_cast<std::size_t>(swap_with)]);
            }
            std::sort(rows.begin(), rows.begin() + M);
            const double w = cell_weight / M;
            for (int t = 0; t < M; ++t)
                out.entries.push_back({rows[static_cast<std::size_t>(t)], w, i, j});
        }
    }
    return out;
}

WeightedSample union_coreset(const std::vector<WeightedSample>& per_group) {
    WeightedSample out;
    std::set<int> seen;
    for (const auto& s : per_group) {
        std::set<int> own;
        for (const auto& e : s.entries) own.insert(e.group);
        for (int g : own) {
            if (seen.count(g)) throw InputError("overlapping group tags in coreset union");
            seen.insert(g);
        }
        out.entries.insert(out.entries.end(), s.entries.begin(), s.entries.end());
    }
    return out;
}

double coreset_error(const GroupedDataset& data, const WeightedSample& sample,
                     const std::vector<CenterSet>& trial_centers, double z) {
    if (trial_centers.empty()) throw InputError("need at least one trial center set");

    double worst = 0.0;
    for (const auto& centers : trial_centers) {
        for (int j = 0; j < data.n_groups; ++j) {
            const auto idx = data.group_indices(j);
            Matrix pts(idx.size(), data.dim());
            Vector w(idx.size());
            for (std::size_t r = 0; r < idx.size(); ++r) {
                pts.row(static_cast<Eigen::Index>(r)) = data.points.row(idx[r]);
                w[static_cast<Eigen::Index>(r)] = data.weights[idx[r]];
            }
            const double truth = clustering_cost(centers, pts, w, z);
            if (truth == 0.0) continue;

            const auto [spts, sw] = sample_matrix(data, sample, j);
            if (spts.rows() == 0) continue;
            const double approx = clustering_cost(centers, spts, sw, z);
            worst = std::max(worst, std::abs(approx - truth) / truth);
        }
    }
    return worst;
}

std::pair<Matrix, Vector> sample_matrix(const GroupedDataset& data, const WeightedSample& sample,
                                        int group) {
    std::vector<const SampleEntry*> picked;
    for (const auto& e : sample.entries)
        if (group < 0 || e.group == group) picked.push_back(&e);

    Matrix pts(picked.size(), data.dim());
    Vector w(picked.size());
    for (std::size_t r = 0; r < picked.size(); ++r) {
        pts.row(static_cast<Eigen::Index>(r)) = data.points.row(picked[r]->index);
        w[static_cast<Eigen::Index>(r)] = picked[r]->weight;
    }
    return {std::move(pts), std::move(w)};
}

GroupedDataset sample_dataset(const GroupedDataset& data, const WeightedSample& sample) {
    GroupedDataset out;
    out.points = Matrix(sample.size(), data.dim());
    out.weights = Vector(sample.size());
    out.group_of.resize(sample.size());
    out.n_groups = data.n_groups;
    out.group_names = data.group_names;
    for (std::size_t r = 0; r < sample.size(); ++r) {
        const auto& e = sample.entries[r];
        out.points.row(static_cast<Eigen::Index>(r)) = data.points.row(e.index);
        out.weights[static_cast<Eigen::Index>(r)] = e.weight;
        out.group_of[r] = e.group;
    }
    return out;
}

}  // namespace fairclust
