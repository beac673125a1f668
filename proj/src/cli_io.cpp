#include "fairclust/cli_io.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <unordered_map>
#include <utility>

#include "fairclust/errors.hpp"
#include "fairclust/rng.hpp"

namespace fairclust {

namespace {

constexpr const char* kLibraryVersion = "0.1.0";

// one CSV record; quoted fields may hold commas and doubled quotes
std::vector<std::string> split_record(const std::string& line, int line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    if (quoted) throw InputError("line " + std::to_string(line_no) + ": unterminated quote");
    fields.push_back(std::move(field));
    return fields;
}

std::string trimmed(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "?"; }

bool parse_number(const std::string& cell, double* out) {
    if (cell.empty()) return false;
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size() || !std::isfinite(v)) return false;
    *out = v;
    return true;
}

double weighted_median(std::vector<std::pair<double, double>>& value_weight) {
    std::sort(value_weight.begin(), value_weight.end());
    double total = 0.0;
    for (const auto& [v, w] : value_weight) total += w;
    double cum = 0.0;
    for (const auto& [v, w] : value_weight) {
        cum += w;
        if (cum + 1e-12 >= 0.5 * total) return v;
    }
    return value_weight.back().first;
}

// group-blind center update: weighted means (z = 2) or coordinate-wise
// weighted medians (z = 1); empty clusters fall back to the pooled center
CenterSet blind_centers(const GroupedDataset& data, const Partition& part, int k, double z) {
    const Eigen::Index d = data.dim();
    CenterSet out;
    out.centers = Matrix::Zero(k, d);
    Vector pooled(d);
    if (z == 2.0) {
        pooled = (data.weights.transpose() * data.points).transpose() / data.weights.sum();
        Vector mass = Vector::Zero(k);
        Matrix sums = Matrix::Zero(k, d);
        for (Eigen::Index r = 0; r < data.n(); ++r) {
            const int i = part.cluster_of[static_cast<std::size_t>(r)];
            sums.row(i) += data.weights[r] * data.points.row(r);
            mass[i] += data.weights[r];
        }
        for (int i = 0; i < k; ++i) {
            if (mass[i] > 0.0)
                out.centers.row(i) = sums.row(i) / mass[i];
            else
                out.centers.row(i) = pooled.transpose();
        }
        return out;
    }
    for (Eigen::Index c = 0; c < d; ++c) {
        std::vector<std::pair<double, double>> all;
        for (Eigen::Index r = 0; r < data.n(); ++r)
            all.emplace_back(data.points(r, c), data.weights[r]);
        pooled[c] = weighted_median(all);
    }
    for (int i = 0; i < k; ++i) {
        bool any = false;
        for (Eigen::Index c = 0; c < d; ++c) {
            std::vector<std::pair<double, double>> cell;
            for (Eigen::Index r = 0; r < data.n(); ++r)
                if (part.cluster_of[static_cast<std::size_t>(r)] == i)
                    cell.emplace_back(data.points(r, c), data.weights[r]);
            if (cell.empty()) break;
            any = true;
            out.centers(i, c) = weighted_median(cell);
        }
        if (!any) out.centers.row(i) = pooled.transpose();
    }
    return out;
}

// nearest assignment for the blind baseline; empty clusters steal the point
// with the largest weighted contribution to the blind objective
Partition blind_assign(const GroupedDataset& data, const CenterSet& centers, double z) {
    const Eigen::Index n = data.n();
    const int k = centers.k();
    Partition part;
    part.k = k;
    part.cluster_of.resize(static_cast<std::size_t>(n));
    Vector d2(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        int best = 0;
        double bd = (data.points.row(r) - centers.centers.row(0)).squaredNorm();
        for (int i = 1; i < k; ++i) {
            const double v = (data.points.row(r) - centers.centers.row(i)).squaredNorm();
            if (v < bd) {
                bd = v;
                best = i;
            }
        }
        part.cluster_of[static_cast<std::size_t>(r)] = best;
        d2[r] = bd;
    }
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (int c : part.cluster_of) ++count[static_cast<std::size_t>(c)];
    for (int i = 0; i < k; ++i) {
        if (count[static_cast<std::size_t>(i)] > 0) continue;
        Eigen::Index pick = -1;
        double best_val = -1.0;
        for (Eigen::Index r = 0; r < n; ++r) {
            if (count[static_cast<std::size_t>(part.cluster_of[static_cast<std::size_t>(r)])] < 2)
                continue;
            const double v = data.weights[r] * std::pow(d2[r], 0.5 * z);
            if (v > best_val) {
                best_val = v;
                pick = r;
            }
        }
        if (pick < 0) continue;
        --count[static_cast<std::size_t>(part.cluster_of[static_cast<std::size_t>(pick)])];
        part.cluster_of[static_cast<std::size_t>(pick)] = i;
        count[static_cast<std::size_t>(i)] = 1;
        d2[pick] = 0.0;
    }
    return part;
}

std::string objective_name(Objective o) {
    switch (o) {
        case Objective::kmeans: return "kmeans";
        case Objective::kmedian: return "kmedian";
        case Objective::kz: return "kz";
        case Objective::subspace: return "subspace";
    }
    return "unknown";
}

nlohmann::json vector_json(const Vector& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

nlohmann::json matrix_json(const Matrix& m) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(std::move(row));
    }
    return out;
}

RunConfig normalized(RunConfig config) {
    if (config.objective == Objective::kmeans) config.z = 2.0;
    if (config.objective == Objective::kmedian) config.z = 1.0;
    if (config.z < 1.0) throw InputError("z must be at least 1");
    if (config.k < 1) throw InputError("k must be positive");
    if (config.restarts < 1) throw InputError("restarts must be positive");
    if (config.objective == Objective::subspace) {
        if (config.q < 1) throw InputError("subspace objective requires q >= 1");
    } else if (config.q != 0) {
        throw InputError("q only applies to the subspace objective");
    }
    return config;
}

}  // namespace

LoadResult load_csv(const std::string& path, const std::string& group_column,
                    const std::vector<std::string>& numeric_columns) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw InputError("empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_record(line, 1);

    int group_idx = -1;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (trimmed(header[c]) == group_column) group_idx = static_cast<int>(c);
    if (group_idx < 0) throw InputError("group column '" + group_column + "' not found");
    for (const auto& name : numeric_columns) {
        bool found = false;
        for (const auto& h : header) found = found || trimmed(h) == name;
        if (!found) throw InputError("column '" + name + "' not found");
    }

    LoadResult out;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> row_lines;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_record(line, line_no);
        if (fields.size() != header.size())
            throw InputError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        for (auto& f : fields) f = trimmed(f);
        bool missing = false;
        for (const auto& f : fields) missing = missing || is_missing(f);
        if (missing) {
            ++out.dropped_rows;
            continue;
        }
        rows.push_back(std::move(fields));
        row_lines.push_back(line_no);
    }
    if (rows.empty()) throw InputError("no usable rows in " + path);
    if (out.dropped_rows > 0)
        out.warnings.push_back("dropped " + std::to_string(out.dropped_rows) +
                               " rows with missing values");

    const std::size_t n = rows.size();
    const std::size_t n_cols = header.size();

    // column typing: forced-numeric columns must parse; others auto-detect
    std::vector<ColumnInfo> columns;
    int width = 0;
    for (std::size_t c = 0; c < n_cols; ++c) {
        if (static_cast<int>(c) == group_idx) continue;
        ColumnInfo info;
        info.name = trimmed(header[c]);
        const bool forced =
            std::find(numeric_columns.begin(), numeric_columns.end(), info.name) !=
            numeric_columns.end();
        bool numeric = true;
        for (std::size_t r = 0; r < n; ++r) {
            double v;
            if (!parse_number(rows[r][c], &v)) {
                if (forced)
                    throw InputError("column '" + info.name + "', line " +
                                     std::to_string(row_lines[r]) + ": cannot parse '" +
                                     rows[r][c] + "' as a number");
                numeric = false;
                break;
            }
        }
        info.categorical = !numeric;
        if (info.categorical) {
            for (std::size_t r = 0; r < n; ++r) {
                const auto& v = rows[r][c];
                if (std::find(info.categories.begin(), info.categories.end(), v) ==
                    info.categories.end())
                    info.categories.push_back(v);
            }
        }
        info.feature_offset = width;
        width += info.categorical ? static_cast<int>(info.categories.size()) : 1;
        columns.push_back(std::move(info));
    }

    out.data.points = Matrix::Zero(static_cast<Eigen::Index>(n), width);
    out.data.weights = Vector::Ones(static_cast<Eigen::Index>(n));
    out.data.group_of.resize(n);
    std::unordered_map<std::string, int> group_ids;
    for (std::size_t r = 0; r < n; ++r) {
        const std::string& g = rows[r][static_cast<std::size_t>(group_idx)];
        auto it = group_ids.find(g);
        if (it == group_ids.end()) {
            it = group_ids.emplace(g, static_cast<int>(out.data.group_names.size())).first;
            out.data.group_names.push_back(g);
        }
        out.data.group_of[r] = it->second;
    }
    out.data.n_groups = static_cast<int>(out.data.group_names.size());
    if (out.data.n_groups == 1)
        out.warnings.push_back("single group '" + out.data.group_names[0] +
                               "': the fair objective coincides with the group-blind one");

    std::size_t source = 0;
    for (std::size_t c = 0; c < n_cols; ++c) {
        if (static_cast<int>(c) == group_idx) continue;
        const ColumnInfo& info = columns[source++];
        for (std::size_t r = 0; r < n; ++r) {
            if (!info.categorical) {
                double v = 0.0;
                parse_number(rows[r][c], &v);
                out.data.points(static_cast<Eigen::Index>(r), info.feature_offset) = v;
            } else {
                const auto pos = std::find(info.categories.begin(), info.categories.end(),
                                           rows[r][c]) -
                                 info.categories.begin();
                out.data.points(static_cast<Eigen::Index>(r),
                                info.feature_offset + static_cast<Eigen::Index>(pos)) = 1.0;
            }
        }
    }

    for (const auto& info : columns) {
        if (!info.categorical) {
            out.feature_names.push_back(info.name);
            continue;
        }
        for (const auto& cat : info.categories) out.feature_names.push_back(info.name + "=" + cat);
    }
    out.columns = std::move(columns);

    const auto problems = validate(out.data);
    if (!problems.empty()) throw InputError("invalid dataset: " + problems.front());
    return out;
}

PreprocessResult preprocess(const GroupedDataset& data, bool standardize,
                            std::optional<int> pca_dim) {
    PreprocessResult out;
    out.data = data;
    const double total_w = data.weights.sum();

    if (standardize) {
        const Vector mean = (data.weights.transpose() * data.points).transpose() / total_w;
        Vector var = Vector::Zero(data.dim());
        for (Eigen::Index r = 0; r < data.n(); ++r) {
            const Vector centered = (data.points.row(r).transpose() - mean);
            var += data.weights[r] * centered.cwiseProduct(centered);
        }
        var /= total_w;

        std::vector<Eigen::Index> keep;
        for (Eigen::Index c = 0; c < data.dim(); ++c) {
            if (var[c] > 1e-12) {
                keep.push_back(c);
            } else {
                out.warnings.push_back("dropped constant feature column " + std::to_string(c));
            }
        }
        if (keep.empty()) throw InputError("all feature columns are constant");
        Matrix scaled(data.n(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t c = 0; c < keep.size(); ++c)
            scaled.col(static_cast<Eigen::Index>(c)) =
                (data.points.col(keep[c]).array() - mean[keep[c]]).matrix() /
                std::sqrt(var[keep[c]]);
        out.data.points = std::move(scaled);
    }

    if (pca_dim) {
        const Eigen::Index d = out.data.dim();
        if (*pca_dim < 1 || *pca_dim >= d)
            throw InputError("pca dimension must be in [1, " + std::to_string(d) + ")");
        const Vector mean =
            (out.data.weights.transpose() * out.data.points).transpose() / total_w;
        Matrix cov = Matrix::Zero(d, d);
        for (Eigen::Index r = 0; r < out.data.n(); ++r) {
            const Vector centered = out.data.points.row(r).transpose() - mean;
            cov += out.data.weights[r] * (centered * centered.transpose());
        }
        cov /= total_w;
        Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
        Matrix top(d, *pca_dim);
        for (int c = 0; c < *pca_dim; ++c) top.col(c) = eig.eigenvectors().col(d - 1 - c);
        out.data.points = (out.data.points.rowwise() - mean.transpose()) * top;
    }
    return out;
}

BaselineResult baseline_group_blind(const GroupedDataset& data, const RunConfig& raw) {
    const RunConfig config = normalized(raw);
    BaselineResult out;

    if (config.objective == Objective::subspace) {
        ProjectorSet ps = pca_baseline(data, config.q);
        out.fair_metric = fair_subspace_cost(ps, data, config.z);
        out.per_restart_fcost.assign(static_cast<std::size_t>(config.restarts),
                                     out.fair_metric.fcost);
        out.projectors = std::move(ps);
        return out;
    }
    if (config.z != 1.0 && config.z != 2.0)
        throw InputError("group-blind baseline supports z in {1, 2} or the subspace objective");

    double best_blind = std::numeric_limits<double>::infinity();
    for (int r = 0; r < config.restarts; ++r) {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
        Rng init(stream_seed(seed));
        Partition part;
        part.k = config.k;
        part.cluster_of.resize(static_cast<std::size_t>(data.n()));
        for (auto& c : part.cluster_of) c = init.index(config.k);

        CenterSet centers;
        for (int t = 0; t < config.iters; ++t) {
            centers = blind_centers(data, part, config.k, config.z);
            Partition next = blind_assign(data, centers, config.z);
            const bool converged = next.cluster_of == part.cluster_of;
            part = std::move(next);
            if (converged) break;
        }
        const double blind =
            std::pow(clustering_cost(centers, data.points, data.weights, config.z),
                     1.0 / config.z);
        const FairCostResult fair = fair_cost(centers, data, config.z);
        out.per_restart_fcost.push_back(fair.fcost);
        if (blind < best_blind) {
            best_blind = blind;
            out.fair_metric = fair;
            out.centers = centers;
        }
    }
    return out;
}

nlohmann::json run(const RunConfig& raw) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig config = normalized(raw);

    LoadResult loaded = load_csv(config.input_path, config.group_column);
    std::optional<int> pca = config.pca_dim;
    if (pca && *pca == 0) pca = config.k;
    PreprocessResult pre = preprocess(loaded.data, config.standardize, pca);
    const GroupedDataset& data = pre.data;

    DriverConfig dcfg;
    dcfg.objective = config.objective == Objective::subspace ? ObjectiveKind::subspaces
                                                             : ObjectiveKind::centers;
    dcfg.k = config.k;
    dcfg.z = config.z;
    dcfg.q = config.objective == Objective::subspace ? config.q : 0;
    dcfg.samples = config.samples;
    dcfg.iterations = config.iters;
    dcfg.use_ellipsoid = config.use_ellipsoid;
    dcfg.seed = config.seed;

    FairSolution fair;
    std::vector<RunTrace> traces;
    std::string mode;
    if (config.exhaustive) {
        mode = "exhaustive";
        WeightedSample sample;
        for (Eigen::Index r = 0; r < data.n(); ++r)
            sample.entries.push_back({static_cast<int>(r), data.weights[r], 0,
                                      data.group_of[static_cast<std::size_t>(r)]});
        fair = exhaustive_framework(sample, data, dcfg);
    } else {
        mode = "multi_restart";
        MultiRestartResult result = multi_restart(data, dcfg, config.restarts, config.seed);
        fair = std::move(result.best);
        traces = std::move(result.traces);
    }

    nlohmann::json report;
    report["version"] = kLibraryVersion;
    report["config"] = {
        {"input", config.input_path},
        {"group_column", config.group_column},
        {"objective", objective_name(config.objective)},
        {"k", config.k},
        {"z", config.z},
        {"q", config.objective == Objective::subspace ? nlohmann::json(config.q)
                                                      : nlohmann::json(nullptr)},
        {"samples", config.samples},
        {"iters", config.iters},
        {"restarts", config.restarts},
        {"seed", config.seed},
        {"solver", config.use_ellipsoid ? "ellipsoid" : "subgradient"},
        {"standardize", config.standardize},
        {"pca_dim", pca ? nlohmann::json(*pca) : nlohmann::json(nullptr)},
        {"exhaustive", config.exhaustive},
    };

    nlohmann::json warnings = nlohmann::json::array();
    for (const auto& w : loaded.warnings) warnings.push_back(w);
    for (const auto& w : pre.warnings) warnings.push_back(w);
    nlohmann::json group_sizes = nlohmann::json::array();
    for (int j = 0; j < data.n_groups; ++j)
        group_sizes.push_back(static_cast<std::uint64_t>(data.group_indices(j).size()));
    report["data"] = {
        {"rows", data.n()},          {"features", data.dim()},
        {"dropped_rows", loaded.dropped_rows}, {"groups", data.group_names},
        {"group_sizes", group_sizes}, {"warnings", warnings},
    };

    nlohmann::json fair_json;
    fair_json["fcost"] = fair.fcost();
    fair_json["beta"] = fair.beta;
    fair_json["per_group"] = vector_json(fair.per_group_cost);
    fair_json["seed"] = fair.seed;
    fair_json["mode"] = mode;
    fair_json["iterations"] = fair.iterations;
    if (config.objective == Objective::subspace)
        fair_json["rounding_factor_label"] =
            "sqrt(2)*gamma_z*l^(1/z) with gamma_z ~ sqrt(z/e)";
    nlohmann::json restarts_json = nlohmann::json::array();
    for (const auto& trace : traces) {
        nlohmann::json t;
        t["seed"] = trace.seed;
        t["best_index"] = trace.best_index;
        nlohmann::json iters = nlohmann::json::array();
        for (const auto& it : trace.iterations)
            iters.push_back({{"fcost", it.fcost},
                             {"per_group", vector_json(it.per_group)},
                             {"seconds", it.seconds}});
        t["trace"] = std::move(iters);
        restarts_json.push_back(std::move(t));
    }
    fair_json["restarts"] = std::move(restarts_json);
    report["fair"] = std::move(fair_json);

    const bool baseline_possible = config.objective == Objective::subspace ||
                                   config.z == 1.0 || config.z == 2.0;
    if (baseline_possible) {
        BaselineResult baseline = baseline_group_blind(data, config);
        report["baseline"] = {
            {"fcost", baseline.fair_metric.fcost},
            {"per_group", vector_json(baseline.fair_metric.per_group)},
            {"per_restart_fcost", baseline.per_restart_fcost},
        };
    } else {
        report["baseline"] = nullptr;
    }

    if (fair.centers) {
        report["solution"] = {{"type", "centers"}, {"centers", matrix_json(fair.centers->centers)}};
    } else {
        nlohmann::json bases = nlohmann::json::array();
        for (const auto& b : fair.projectors->basis) bases.push_back(matrix_json(b));
        report["solution"] = {{"type", "subspaces"},
                              {"complement_bases", std::move(bases)},
                              {"q", fair.projectors->q}};
    }

    report["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                 .count();

    if (!config.output_path.empty()) {
        std::ofstream outf(config.output_path);
        if (!outf) throw InputError("cannot write report to " + config.output_path);
        outf << report.dump(2) << "\n";
    }
    return report;
}

}  // namespace fairclust
