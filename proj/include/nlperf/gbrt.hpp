#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nlperf/featurize.hpp"
#include <json.hpp>

namespace nlperf {

struct BoosterParams {
    double learning_rate = 0.1;
    int num_trees = 100;
    int max_depth = 10;
    double lambda = 1.0;       // L2 leaf regularizer
    double gamma = 0.0;        // split penalty
    double min_child_weight = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct TreeNode {
    bool leaf = true;
    int feature = -1;
    double threshold = 0.0;
    bool default_left = true;  // learned direction for missing values
    int left = -1;
    int right = -1;
    double weight = 0.0;       // leaf output
    double gain = 0.0;         // realized split gain (internal nodes)
};

struct RegressionTree {
    std::vector<TreeNode> nodes;  // node 0 is the root

    double route(const std::vector<double>& values, const std::vector<bool>& missing) const;
    int depth() const;
    void validate() const;
};

// The trained regressor: prediction = base_score + learning_rate * sum of
// tree outputs.
class BoostedModel {
public:
    double base_score = 0.0;
    std::vector<RegressionTree> trees;
    BoosterParams params;
    std::vector<std::string> feature_names;

    double predict(const FeatureVector& fv) const;

    // Total realized split gain per feature; features never split on are absent.
    std::map<std::string, double> feature_importance() const;

    nlohmann::json to_json() const;
    static BoostedModel from_json(const nlohmann::json& j);
    void save(const std::string& path) const;
    static BoostedModel load(const std::string& path);
};

// Exact greedy gradient boosting with squared-error objective and
// sparsity-aware learned default directions. Deterministic: identical data
// and params give a bit-identical model, independent of example order.
BoostedModel fit(std::span<const FeatureVector> rows, std::span<const double> targets,
                 const BoosterParams& params, const std::vector<std::string>& feature_names,
                 std::vector<double>* round_rmse = nullptr);

inline BoostedModel fit(const FeatureMatrix& matrix, std::span<const double> targets,
                        const BoosterParams& params, std::vector<double>* round_rmse = nullptr) {
    return fit(matrix.rows, targets, params, matrix.feature_names, round_rmse);
}

}  // namespace nlperf
