#include "nlperf/gbrt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace nlperf {

void BoosterParams::validate() const {
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
        throw std::invalid_argument("learning_rate must be in (0,1]");
    }
    if (num_trees < 1) throw std::invalid_argument("num_trees must be >= 1");
    if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    if (gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
    if (min_child_weight < 0.0) throw std::invalid_argument("min_child_weight must be >= 0");
}

double RegressionTree::route(const std::vector<double>& values, const std::vector<bool>& missing) const {
    int node = 0;
    while (!nodes[static_cast<std::size_t>(node)].leaf) {
        const TreeNode& n = nodes[static_cast<std::size_t>(node)];
        const auto f = static_cast<std::size_t>(n.feature);
        const bool is_missing = missing[f] || std::isnan(values[f]);
        if (is_missing) {
            node = n.default_left ? n.left : n.right;
        } else {
            node = values[f] < n.threshold ? n.left : n.right;
        }
    }
    return nodes[static_cast<std::size_t>(node)].weight;
}

namespace {

int depth_from(const std::vector<TreeNode>& nodes, int id) {
    const TreeNode& n = nodes[static_cast<std::size_t>(id)];
    if (n.leaf) return 0;
    return 1 + std::max(depth_from(nodes, n.left), depth_from(nodes, n.right));
}

}  // namespace

int RegressionTree::depth() const {
    if (nodes.empty()) return 0;
    return depth_from(nodes, 0);
}

void RegressionTree::validate() const {
    if (nodes.empty()) throw std::runtime_error("tree has no nodes");
    for (const auto& n : nodes) {
        if (n.leaf) continue;
        if (n.feature < 0) throw std::runtime_error("split node without feature");
        auto in_range = [&](int id) {
            return id >= 0 && static_cast<std::size_t>(id) < nodes.size();
        };
        if (!in_range(n.left) || !in_range(n.right)) {
            throw std::runtime_error("split node with missing child");
        }
    }
}

double BoostedModel::predict(const FeatureVector& fv) const {
    if (fv.values.size() != feature_names.size() || fv.missing.size() != feature_names.size()) {
        throw std::invalid_argument("predict: vector length does not match model features");
    }
    double sum = 0.0;
    for (const auto& tree : trees) sum += tree.route(fv.values, fv.missing);
    return base_score + params.learning_rate * sum;
}

std::map<std::string, double> BoostedModel::feature_importance() const {
    std::map<std::string, double> importance;
    for (const auto& tree : trees) {
        for (const auto& n : tree.nodes) {
            if (!n.leaf) importance[feature_names[static_cast<std::size_t>(n.feature)]] += n.gain;
        }
    }
    return importance;
}

nlohmann::json BoostedModel::to_json() const {
    nlohmann::json j;
    j["base_score"] = base_score;
    j["feature_names"] = feature_names;
    j["params"] = {{"learning_rate", params.learning_rate},
                   {"num_trees", params.num_trees},
                   {"max_depth", params.max_depth},
                   {"lambda", params.lambda},
                   {"gamma", params.gamma},
                   {"min_child_weight", params.min_child_weight},
                   {"seed", params.seed}};
    nlohmann::json trees_json = nlohmann::json::array();
    for (const auto& tree : trees) {
        nlohmann::json nodes_json = nlohmann::json::array();
        for (const auto& n : tree.nodes) {
            if (n.leaf) {
                nodes_json.push_back({{"kind", "leaf"}, {"weight", n.weight}});
            } else {
                nodes_json.push_back({{"kind", "split"},
                                      {"feature", n.feature},
                                      {"threshold", n.threshold},
                                      {"default", n.default_left ? "left" : "right"},
                                      {"left", n.left},
                                      {"right", n.right},
                                      {"gain", n.gain}});
            }
        }
        trees_json.push_back({{"nodes", std::move(nodes_json)}});
    }
    j["trees"] = std::move(trees_json);
    return j;
}

BoostedModel BoostedModel::from_json(const nlohmann::json& j) {
    BoostedModel model;
    model.base_score = j.at("base_score").get<double>();
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    const auto& p = j.at("params");
    model.params.learning_rate = p.at("learning_rate").get<double>();
    model.params.num_trees = p.at("num_trees").get<int>();
    model.params.max_depth = p.at("max_depth").get<int>();
    model.params.lambda = p.at("lambda").get<double>();
    model.params.gamma = p.at("gamma").get<double>();
    model.params.min_child_weight = p.at("min_child_weight").get<double>();
    model.params.seed = p.at("seed").get<std::uint64_t>();
    for (const auto& tree_json : j.at("trees")) {
        RegressionTree tree;
        for (const auto& node_json : tree_json.at("nodes")) {
            TreeNode n;
            if (node_json.at("kind").get<std::string>() == "leaf") {
                n.leaf = true;
                n.weight = node_json.at("weight").get<double>();
            } else {
                n.leaf = false;
                n.feature = node_json.at("feature").get<int>();
                n.threshold = node_json.at("threshold").get<double>();
                n.default_left = node_json.at("default").get<std::string>() == "left";
                n.left = node_json.at("left").get<int>();
                n.right = node_json.at("right").get<int>();
                n.gain = node_json.at("gain").get<double>();
            }
            tree.nodes.push_back(n);
        }
        tree.validate();
        if (tree.depth() > model.params.max_depth) {
            throw std::runtime_error("tree depth exceeds max_depth");
        }
        model.trees.push_back(std::move(tree));
    }
    return model;
}

void BoostedModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << to_json().dump(2) << '\n';
}

BoostedModel BoostedModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return from_json(nlohmann::json::parse(in));
}

namespace {

// Sums after sorting so the result does not depend on input-example order.
double canonical_sum(std::vector<double>& scratch) {
    std::sort(scratch.begin(), scratch.end());
    double sum = 0.0;
    for (double v : scratch) sum += v;
    return sum;
}

struct SplitChoice {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
    bool default_left = true;

    bool found() const { return feature >= 0; }
};

class TreeGrower {
public:
    TreeGrower(const std::vector<std::vector<double>>& columns, const std::vector<double>& grad,
               const BoosterParams& params)
        : columns_(columns), grad_(grad), params_(params) {}

    // Grows one tree over the given example indices and writes each example's
    // leaf output into tree_output.
    RegressionTree grow(const std::vector<std::size_t>& indices, std::vector<double>& tree_output) {
        nodes_.clear();
        build(indices, 0, tree_output);
        RegressionTree tree;
        tree.nodes = std::move(nodes_);
        return tree;
    }

private:
    double node_grad_sum(const std::vector<std::size_t>& indices) const {
        std::vector<double> g;
        g.reserve(indices.size());
        for (std::size_t i : indices) g.push_back(grad_[i]);
        std::vector<double> scratch = std::move(g);
        return canonical_sum(scratch);
    }

    double score(double g, double h) const { return g * g / (h + params_.lambda); }

    SplitChoice best_split(const std::vector<std::size_t>& indices, double total_g,
                           double total_h) const {
        SplitChoice best;
        const double parent_score = score(total_g, total_h);

        for (std::size_t f = 0; f < columns_.size(); ++f) {
            const auto& col = columns_[f];
            std::vector<std::pair<double, double>> present;  // (value, grad)
            std::vector<double> missing_g;
            present.reserve(indices.size());
            for (std::size_t i : indices) {
                if (std::isnan(col[i])) {
                    missing_g.push_back(grad_[i]);
                } else {
                    present.emplace_back(col[i], grad_[i]);
                }
            }
            if (present.size() < 2) continue;
            std::sort(present.begin(), present.end());

            const double g_miss = canonical_sum(missing_g);
            const double h_miss = static_cast<double>(missing_g.size());

            double g_prefix = 0.0;
            for (std::size_t i = 0; i + 1 < present.size(); ++i) {
                g_prefix += present[i].second;
                if (present[i].first == present[i + 1].first) continue;
                double threshold = (present[i].first + present[i + 1].first) / 2.0;
                if (!(threshold > present[i].first)) continue;  // adjacent floats

                const double h_prefix = static_cast<double>(i + 1);
                // Missing examples tried on each side; the better side becomes
                // the stored default direction.
                for (bool miss_left : {true, false}) {
                    double g_left = miss_left ? g_prefix + g_miss : g_prefix;
                    double h_left = miss_left ? h_prefix + h_miss : h_prefix;
                    double g_right = total_g - g_left;
                    double h_right = total_h - h_left;
                    if (h_left < params_.min_child_weight || h_right < params_.min_child_weight) {
                        continue;
                    }
                    double gain =
                        0.5 * (score(g_left, h_left) + score(g_right, h_right) - parent_score) -
                        params_.gamma;
                    if (gain > best.gain) {
                        best.gain = gain;
                        best.feature = static_cast<int>(f);
                        best.threshold = threshold;
                        best.default_left = miss_left;
                    }
                }
            }
        }
        return best;
    }

    int build(const std::vector<std::size_t>& indices, int depth, std::vector<double>& tree_output) {
        const double total_g = node_grad_sum(indices);
        const double total_h = static_cast<double>(indices.size());

        SplitChoice split;
        if (depth < params_.max_depth && indices.size() >= 2) {
            split = best_split(indices, total_g, total_h);
        }

        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();

        if (!split.found() || !(split.gain > 0.0)) {
            TreeNode& n = nodes_[static_cast<std::size_t>(id)];
            n.leaf = true;
            n.weight = -total_g / (total_h + params_.lambda);
            for (std::size_t i : indices) tree_output[i] = n.weight;
            return id;
        }

        std::vector<std::size_t> left_idx, right_idx;
        const auto& col = columns_[static_cast<std::size_t>(split.feature)];
        for (std::size_t i : indices) {
            bool go_left;
            if (std::isnan(col[i])) {
                go_left = split.default_left;
            } else {
                go_left = col[i] < split.threshold;
            }
            (go_left ? left_idx : right_idx).push_back(i);
        }

        {
            TreeNode& n = nodes_[static_cast<std::size_t>(id)];
            n.leaf = false;
            n.feature = split.feature;
            n.threshold = split.threshold;
            n.default_left = split.default_left;
            n.gain = split.gain;
        }
        const int left = build(left_idx, depth + 1, tree_output);
        const int right = build(right_idx, depth + 1, tree_output);
        nodes_[static_cast<std::size_t>(id)].left = left;
        nodes_[static_cast<std::size_t>(id)].right = right;
        return id;
    }

    const std::vector<std::vector<double>>& columns_;
    const std::vector<double>& grad_;
    const BoosterParams& params_;
    std::vector<TreeNode> nodes_;
};

}  // namespace

BoostedModel fit(std::span<const FeatureVector> rows, std::span<const double> targets,
                 const BoosterParams& params, const std::vector<std::string>& feature_names,
                 std::vector<double>* round_rmse) {
    params.validate();
    if (rows.empty()) throw std::invalid_argument("fit: empty input");
    if (rows.size() != targets.size()) throw std::invalid_argument("fit: rows/targets length mismatch");
    for (double y : targets) {
        if (!std::isfinite(y)) throw std::invalid_argument("fit: non-finite target");
    }
    const std::size_t n = rows.size();
    const std::size_t num_features = feature_names.size();
    for (const auto& row : rows) {
        if (row.values.size() != num_features || row.missing.size() != num_features) {
            throw std::invalid_argument("fit: row length does not match feature names");
        }
    }

    // Column-major layout with NaN marking missing values.
    std::vector<std::vector<double>> columns(num_features, std::vector<double>(n));
    for (std::size_t f = 0; f < num_features; ++f) {
        for (std::size_t i = 0; i < n; ++i) {
            columns[f][i] =
                rows[i].missing[f] ? std::numeric_limits<double>::quiet_NaN() : rows[i].values[f];
        }
    }

    BoostedModel model;
    model.params = params;
    model.feature_names = feature_names;
    {
        std::vector<double> scratch(targets.begin(), targets.end());
        model.base_score = canonical_sum(scratch) / static_cast<double>(n);
    }

    std::vector<double> preds(n, model.base_score);
    std::vector<double> grad(n, 0.0);
    std::vector<double> tree_output(n, 0.0);
    std::vector<std::size_t> all_indices(n);
    for (std::size_t i = 0; i < n; ++i) all_indices[i] = i;

    TreeGrower grower(columns, grad, params);
    if (round_rmse) round_rmse->clear();

    for (int round = 0; round < params.num_trees; ++round) {
        for (std::size_t i = 0; i < n; ++i) grad[i] = preds[i] - targets[i];
        model.trees.push_back(grower.grow(all_indices, tree_output));
        for (std::size_t i = 0; i < n; ++i) preds[i] += params.learning_rate * tree_output[i];
        if (round_rmse) {
            std::vector<double> sq(n);
            for (std::size_t i = 0; i < n; ++i) {
                double d = preds[i] - targets[i];
                sq[i] = d * d;
            }
            round_rmse->push_back(std::sqrt(canonical_sum(sq) / static_cast<double>(n)));
        }
    }
    return model;
}

}  // namespace nlperf
