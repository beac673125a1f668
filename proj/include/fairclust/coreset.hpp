#ifndef FAIRCLUST_CORESET_HPP
#define FAIRCLUST_CORESET_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "fairclust/dataset.hpp"

namespace fairclust {

/// One sampled point: a row of the parent dataset, its sample weight, and the
/// cell it came from. cluster is -1 when the sample is tagged by group only.
struct SampleEntry {
    int index = 0;
    double weight = 1.0;
    int cluster = -1;
    int group = 0;
};

/// Weighted subsample of a parent dataset. Weights are chosen so that the
/// total sample weight of every cell equals the cell's total source weight.
struct WeightedSample {
    std::vector<SampleEntry> entries;

    std::size_t size() const { return entries.size(); }

    double group_weight(int j) const {
        double w = 0.0;
        for (const auto& e : entries)
            if (e.group == j) w += e.weight;
        return w;
    }
};

/// Per-cell uniform subsample: every nonempty cell (cluster i, group j) keeps
/// all its points with their original weights when the cell has at most M
/// points, and otherwise M points drawn uniformly without replacement, each
/// carrying weight (cell weight)/M. Cell draws use independent RNG streams
/// derived from (rng_seed, i, j), so the result does not depend on traversal
/// order.
WeightedSample uniform_cell_sample(const GroupedDataset& data, const Partition& partition, int M,
                                   std::uint64_t rng_seed);

/// Concatenation of per-group samples. Throws InputError when two inputs
/// contain entries tagged with the same group.
WeightedSample union_coreset(const std::vector<WeightedSample>& per_group);

/// Max over trial center sets and groups of the relative error
/// |cost(C, S_j) - cost(C, X_j)| / cost(C, X_j); (trial, group) pairs with
/// zero true cost are skipped.
double coreset_error(const GroupedDataset& data, const WeightedSample& sample,
                     const std::vector<CenterSet>& trial_centers, double z);

/// Materialize the sample (optionally restricted to one group) as a weighted
/// point set.
std::pair<Matrix, Vector> sample_matrix(const GroupedDataset& data, const WeightedSample& sample,
                                        int group = -1);

/// Grouped view of the sample, weights included; group labels and count are
/// inherited from the parent.
GroupedDataset sample_dataset(const GroupedDataset& data, const WeightedSample& sample);

}  // namespace fairclust

#endif  // FAIRCLUST_CORESET_HPP
