#ifndef FAIRCLUST_CLI_IO_HPP
#define FAIRCLUST_CLI_IO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairclust/cost.hpp"
#include "fairclust/driver.hpp"

namespace fairclust {

/// One input column after ingestion. Categorical columns expand into one
/// binary feature per category; feature_offset points at the first encoded
/// feature column.
struct ColumnInfo {
    std::string name;
    bool categorical = false;
    std::vector<std::string> categories;  // encoding order (first appearance)
    int feature_offset = 0;
};

struct LoadResult {
    GroupedDataset data;                     // unit weights
    std::vector<ColumnInfo> columns;         // feature columns, file order
    std::vector<std::string> feature_names;  // encoded columns ("col" or "col=value")
    int dropped_rows = 0;                    // rows with missing cells
    std::vector<std::string> warnings;
};

/// Reads a comma-separated file with a header row; quoted fields may contain
/// commas and doubled quotes. The group column maps to dense labels in order
/// of first appearance and is excluded from the features. Rows with missing
/// cells (empty or "?") are dropped and counted. Columns named in
/// numeric_columns must parse as numbers; other columns are numeric when every
/// kept cell parses, categorical (one-hot) otherwise.
LoadResult load_csv(const std::string& path, const std::string& group_column,
                    const std::vector<std::string>& numeric_columns = {});

struct PreprocessResult {
    GroupedDataset data;
    std::vector<std::string> warnings;  // dropped constant columns, by encoded index
};

/// Standardizes every feature to weighted mean 0 / variance 1, dropping
/// zero-variance columns with a warning; when pca_dim is set, then projects
/// onto the top pca_dim principal components of the centered data.
PreprocessResult preprocess(const GroupedDataset& data, bool standardize,
                            std::optional<int> pca_dim);

enum class Objective { kmeans, kmedian, kz, subspace };

struct RunConfig {
    std::string input_path;
    std::string group_column;
    Objective objective = Objective::kmeans;
    int k = 1;
    double z = 2.0;  // kz/subspace only; forced to 2 or 1 for kmeans/kmedian
    int q = 0;       // subspace only
    int samples = 100;
    int iters = 20;
    int restarts = 1;
    std::uint64_t seed = 0;
    bool use_ellipsoid = false;
    bool standardize = true;
    std::optional<int> pca_dim;  // 0 means "default to k"
    bool exhaustive = false;
    std::string output_path;  // empty: do not write a file
};

/// Group-blind reference: plain Lloyd with per-cluster weighted means (z = 2)
/// or coordinate-wise weighted medians (z = 1), restarted like the fair run
/// from the same initial labels; pooled principal directions for the subspace
/// objective. Scored with the fair metric.
struct BaselineResult {
    FairCostResult fair_metric;              // of the restart with best blind cost
    std::vector<double> per_restart_fcost;   // fair metric of each restart
    std::optional<CenterSet> centers;
    std::optional<ProjectorSet> projectors;
};

BaselineResult baseline_group_blind(const GroupedDataset& data, const RunConfig& config);

/// Full pipeline: load, preprocess, fair solve (multi-restart or exhaustive),
/// group-blind baseline, report. Writes the report to output_path when set
/// and returns it. Throws InputError (exit 2 at the CLI) or SolverError
/// (exit 3).
nlohmann::json run(const RunConfig& config);

}  // namespace fairclust

#endif  // FAIRCLUST_CLI_IO_HPP
