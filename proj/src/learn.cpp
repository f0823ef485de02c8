#include "textcomp/learn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "textcomp/error.hpp"
#include "textcomp/rng.hpp"

namespace textcomp {

namespace {

using json = nlohmann::ordered_json;

double entropy_of(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

void check_params(const ForestParams& params) {
    if (params.n_trees < 1) fail("InvariantViolation", "n_trees must be >= 1");
    if (params.min_leaf < 1) fail("InvariantViolation", "min_leaf must be >= 1");
    if (params.features_per_split < 1 || params.features_per_split > kFeatureCount) {
        fail("InvariantViolation", "features_per_split must lie in [1, 16]");
    }
    if (params.max_depth && *params.max_depth < 0) {
        fail("InvariantViolation", "max_depth must be >= 0");
    }
}

std::vector<int> resolve_subset(const std::vector<int>& subset) {
    if (subset.empty()) return all_features();
    std::vector<int> out = subset;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (int f : out) {
        if (f < 0 || f >= kFeatureCount) {
            fail("InvariantViolation", "feature index " + std::to_string(f) + " out of range");
        }
    }
    return out;
}

}  // namespace

std::vector<int> all_features() {
    std::vector<int> out(kFeatureCount);
    for (int i = 0; i < kFeatureCount; ++i) out[i] = i;
    return out;
}

double entropy(std::int64_t count_same, std::int64_t count_diff) {
    if (count_same < 0 || count_diff < 0 || count_same + count_diff == 0) {
        fail("EmptyCounts", "entropy needs a non-empty, non-negative count pair");
    }
    const double total = static_cast<double>(count_same + count_diff);
    return entropy_of(static_cast<double>(count_same) / total) +
           entropy_of(static_cast<double>(count_diff) / total);
}

SplitResult best_split(const std::vector<const PairInstance*>& data, int feature) {
    if (data.size() < 2) return {};
    std::vector<std::pair<double, PairLabel>> points;
    points.reserve(data.size());
    std::int64_t total_same = 0;
    for (const PairInstance* inst : data) {
        points.emplace_back(inst->vector.deltas[feature], inst->label);
        if (inst->label == PairLabel::Same) total_same++;
    }
    std::sort(points.begin(), points.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const std::int64_t n = static_cast<std::int64_t>(points.size());
    const std::int64_t total_diff = n - total_same;
    const double parent = entropy(total_same, total_diff);

    SplitResult best;
    std::int64_t left_same = 0;
    std::int64_t left_diff = 0;
    for (std::int64_t i = 0; i + 1 < n; ++i) {
        if (points[i].second == PairLabel::Same) left_same++;
        else left_diff++;
        if (points[i].first == points[i + 1].first) continue;
        const std::int64_t left_n = i + 1;
        const double weighted =
            (static_cast<double>(left_n) / n) * entropy(left_same, left_diff) +
            (static_cast<double>(n - left_n) / n) * entropy(total_same - left_same,
                                                            total_diff - left_diff);
        const double gain = std::max(0.0, parent - weighted);
        if (!best.threshold || gain > best.gain) {  // scan ascends: ties keep the smaller
            best.threshold = (points[i].first + points[i + 1].first) / 2.0;
            best.gain = gain;
        }
    }
    return best;  // no change points -> constant feature, gain 0
}

namespace {

class TreeBuilder {
public:
    TreeBuilder(const PairDataset& ds, const ForestParams& params,
                const std::vector<int>& subset, std::mt19937_64& rng)
        : ds_(ds), params_(params), subset_(subset), rng_(rng) {}

    DecisionTree build(const std::vector<std::size_t>& sample) {
        DecisionTree tree;
        grow(tree, sample, 0);
        return tree;
    }

private:
    int grow(DecisionTree& tree, const std::vector<std::size_t>& indices, int depth) {
        std::int64_t n_same = 0;
        for (std::size_t idx : indices) {
            if (ds_.instances[idx].label == PairLabel::Same) n_same++;
        }
        const std::int64_t n_diff = static_cast<std::int64_t>(indices.size()) - n_same;

        const int node_index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes[node_index].n_same = n_same;
        tree.nodes[node_index].n_diff = n_diff;

        const bool depth_capped = params_.max_depth && depth >= *params_.max_depth;
        if (n_same == 0 || n_diff == 0 || indices.size() < 2 || depth_capped) return node_index;

        const auto [feature, threshold] = pick_split(indices);
        if (feature < 0) return node_index;

        std::vector<std::size_t> left_idx;
        std::vector<std::size_t> right_idx;
        for (std::size_t idx : indices) {
            if (ds_.instances[idx].vector.deltas[feature] <= threshold) left_idx.push_back(idx);
            else right_idx.push_back(idx);
        }
        if (left_idx.size() < static_cast<std::size_t>(params_.min_leaf) ||
            right_idx.size() < static_cast<std::size_t>(params_.min_leaf)) {
            return node_index;
        }

        tree.nodes[node_index].feature = feature;
        tree.nodes[node_index].threshold = threshold;
        const int left = grow(tree, left_idx, depth + 1);
        tree.nodes[node_index].left = left;
        const int right = grow(tree, right_idx, depth + 1);
        tree.nodes[node_index].right = right;
        return node_index;
    }

    // fresh random feature subset per node; best gain wins, ties go to the
    // lower feature index
    std::pair<int, double> pick_split(const std::vector<std::size_t>& indices) {
        std::vector<int> pool = subset_;
        const std::size_t k = std::min<std::size_t>(params_.features_per_split, pool.size());
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + uniform_below(rng_, pool.size() - i);
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        std::sort(pool.begin(), pool.end());

        std::vector<const PairInstance*> view;
        view.reserve(indices.size());
        for (std::size_t idx : indices) view.push_back(&ds_.instances[idx]);

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_gain = 0.0;
        for (int f : pool) {
            const SplitResult split = best_split(view, f);
            if (split.threshold && split.gain > best_gain) {
                best_feature = f;
                best_threshold = *split.threshold;
                best_gain = split.gain;
            }
        }
        return {best_feature, best_threshold};
    }

    const PairDataset& ds_;
    const ForestParams& params_;
    const std::vector<int>& subset_;
    std::mt19937_64& rng_;
};

}  // namespace

RandomForest train_forest(const PairDataset& ds, const ForestParams& params,
                          const std::vector<int>& subset) {
    if (ds.instances.empty()) fail("EmptyDataset", "cannot train a forest on zero instances");
    check_params(params);
    RandomForest forest;
    forest.params = params;
    forest.feature_subset = resolve_subset(subset);

    const std::size_t n = ds.instances.size();
    for (int t = 0; t < params.n_trees; ++t) {
        std::mt19937_64 rng(derive_seed(params.seed, static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> sample(n);
        for (std::size_t i = 0; i < n; ++i) {
            sample[i] = static_cast<std::size_t>(uniform_below(rng, n));
        }
        TreeBuilder builder(ds, params, forest.feature_subset, rng);
        forest.trees.push_back(builder.build(sample));
    }
    return forest;
}

std::pair<double, double> DecisionTree::leaf_distribution(
    const std::array<double, kFeatureCount>& v) const {
    int node = 0;
    while (!nodes[node].is_leaf()) {
        node = v[nodes[node].feature] <= nodes[node].threshold ? nodes[node].left
                                                               : nodes[node].right;
    }
    const double total = static_cast<double>(nodes[node].n_same + nodes[node].n_diff);
    return {static_cast<double>(nodes[node].n_same) / total,
            static_cast<double>(nodes[node].n_diff) / total};
}

PairLabel predict(const RandomForest& forest, const std::array<double, kFeatureCount>& v) {
    double p_same = 0.0;
    double p_diff = 0.0;
    for (const auto& tree : forest.trees) {
        const auto [ps, pd] = tree.leaf_distribution(v);
        p_same += ps;
        p_diff += pd;
    }
    return p_same >= p_diff ? PairLabel::Same : PairLabel::Different;
}

CVResult cross_validate(const PairDataset& ds, const ForestParams& params, int k,
                        const std::optional<std::vector<int>>& subset) {
    if (k < 2 || ds.instances.size() < static_cast<std::size_t>(k)) {
        fail("TooFewInstances", "need at least k >= 2 and one instance per fold");
    }
    check_params(params);
    const bool baseline = subset && subset->empty();
    const std::vector<int> resolved = baseline ? std::vector<int>{}
                                               : resolve_subset(subset.value_or(std::vector<int>{}));

    // class-wise shuffle, then deal with one running cursor so both fold
    // sizes and per-fold class counts differ by at most one
    std::vector<std::size_t> same_idx;
    std::vector<std::size_t> diff_idx;
    for (std::size_t i = 0; i < ds.instances.size(); ++i) {
        (ds.instances[i].label == PairLabel::Same ? same_idx : diff_idx).push_back(i);
    }
    std::mt19937_64 rng(params.seed);
    shuffle_in_place(same_idx, rng);
    shuffle_in_place(diff_idx, rng);

    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t cursor = 0;
    for (std::size_t idx : same_idx) folds[cursor++ % k].push_back(idx);
    for (std::size_t idx : diff_idx) folds[cursor++ % k].push_back(idx);

    CVResult result;
    result.feature_subset = resolved;
    for (int f = 0; f < k; ++f) {
        std::vector<bool> held_out(ds.instances.size(), false);
        for (std::size_t idx : folds[f]) held_out[idx] = true;

        PairDataset train;
        train.feature_names = ds.feature_names;
        train.provenance = ds.provenance;
        for (std::size_t i = 0; i < ds.instances.size(); ++i) {
            if (!held_out[i]) train.instances.push_back(ds.instances[i]);
        }

        std::size_t correct = 0;
        if (baseline) {
            std::int64_t train_same = 0;
            for (const auto& inst : train.instances) {
                if (inst.label == PairLabel::Same) train_same++;
            }
            const std::int64_t train_diff =
                static_cast<std::int64_t>(train.instances.size()) - train_same;
            const PairLabel majority =
                train_same >= train_diff ? PairLabel::Same : PairLabel::Different;
            for (std::size_t idx : folds[f]) {
                if (ds.instances[idx].label == majority) correct++;
            }
        } else {
            const RandomForest forest = train_forest(train, params, resolved);
            for (std::size_t idx : folds[f]) {
                if (predict(forest, ds.instances[idx].vector.deltas) == ds.instances[idx].label) {
                    correct++;
                }
            }
        }
        result.fold_accuracies.push_back(static_cast<double>(correct) /
                                         static_cast<double>(folds[f].size()));
    }
    double sum = 0.0;
    for (double acc : result.fold_accuracies) sum += acc;
    result.mean = sum / static_cast<double>(k);
    return result;
}

// ---------------------------------------------------------------------------
// Welch's t-test

namespace {

// continued fraction for the incomplete beta function (Lentz's method)
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 300;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double sample_mean(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs, double mean) {
    double sum = 0.0;
    for (double x : xs) sum += (x - mean) * (x - mean);
    return sum / static_cast<double>(xs.size() - 1);
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) {
        fail("DegenerateSamples", "both samples need at least 2 values");
    }
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double mean_a = sample_mean(a);
    const double mean_b = sample_mean(b);
    const double var_a = sample_variance(a, mean_a);
    const double var_b = sample_variance(b, mean_b);

    TTestResult result;
    if (var_a == 0.0 && var_b == 0.0) {
        result.df = na + nb - 2.0;
        if (mean_a == mean_b) {
            result.t_stat = 0.0;
            result.p_value = 1.0;
        } else {
            result.t_stat = mean_a < mean_b ? -std::numeric_limits<double>::infinity()
                                            : std::numeric_limits<double>::infinity();
            result.p_value = 0.0;
        }
    } else {
        const double se_a = var_a / na;
        const double se_b = var_b / nb;
        result.t_stat = (mean_a - mean_b) / std::sqrt(se_a + se_b);
        result.df = (se_a + se_b) * (se_a + se_b) /
                    (se_a * se_a / (na - 1.0) + se_b * se_b / (nb - 1.0));
        const double t2 = result.t_stat * result.t_stat;
        result.p_value = incomplete_beta(result.df / 2.0, 0.5, result.df / (result.df + t2));
        result.p_value = std::clamp(result.p_value, 0.0, 1.0);
    }
    result.significant_decrease = result.p_value < 0.1 && mean_a < mean_b;
    return result;
}

std::vector<std::pair<int, double>> rank_information_gain(const PairDataset& ds) {
    if (ds.instances.empty()) fail("EmptyDataset", "cannot rank features of an empty dataset");
    std::vector<const PairInstance*> view;
    view.reserve(ds.instances.size());
    for (const auto& inst : ds.instances) view.push_back(&inst);

    std::vector<std::pair<int, double>> ranking;
    for (int f = 0; f < kFeatureCount; ++f) {
        ranking.emplace_back(f, best_split(view, f).gain);
    }
    std::stable_sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) {
        return a.second > b.second;  // ties keep index order
    });
    return ranking;
}

// ---------------------------------------------------------------------------
// serialization

namespace {

json tree_to_json(const DecisionTree& tree, int node) {
    const TreeNode& n = tree.nodes[node];
    if (n.is_leaf()) return json::array({"leaf", n.n_same, n.n_diff});
    return json::array({"split", n.feature, n.threshold, tree_to_json(tree, n.left),
                        tree_to_json(tree, n.right)});
}

int tree_from_json(const json& doc, DecisionTree& tree) {
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    const std::string tag = doc.at(0).get<std::string>();
    if (tag == "leaf") {
        tree.nodes[index].n_same = doc.at(1).get<std::int64_t>();
        tree.nodes[index].n_diff = doc.at(2).get<std::int64_t>();
    } else if (tag == "split") {
        tree.nodes[index].feature = doc.at(1).get<int>();
        tree.nodes[index].threshold = doc.at(2).get<double>();
        const int left = tree_from_json(doc.at(3), tree);
        tree.nodes[index].left = left;
        const int right = tree_from_json(doc.at(4), tree);
        tree.nodes[index].right = right;
    } else {
        fail("SchemaMismatch", "unknown tree node tag '" + tag + "'");
    }
    return index;
}

}  // namespace

std::string forest_to_json(const RandomForest& forest) {
    json doc;
    doc["params"] = {{"n_trees", forest.params.n_trees},
                     {"max_depth", forest.params.max_depth ? json(*forest.params.max_depth)
                                                           : json(nullptr)},
                     {"min_leaf", forest.params.min_leaf},
                     {"features_per_split", forest.params.features_per_split},
                     {"seed", forest.params.seed}};
    doc["feature_subset"] = forest.feature_subset;
    json trees = json::array();
    for (const auto& tree : forest.trees) trees.push_back(tree_to_json(tree, 0));
    doc["trees"] = std::move(trees);
    return doc.dump() + "\n";
}

RandomForest forest_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        fail("SchemaMismatch", std::string("forest JSON: ") + e.what());
    }
    try {
        RandomForest forest;
        const auto& p = doc.at("params");
        forest.params.n_trees = p.at("n_trees").get<int>();
        if (!p.at("max_depth").is_null()) forest.params.max_depth = p.at("max_depth").get<int>();
        forest.params.min_leaf = p.at("min_leaf").get<int>();
        forest.params.features_per_split = p.at("features_per_split").get<int>();
        forest.params.seed = p.at("seed").get<std::uint64_t>();
        forest.feature_subset = doc.at("feature_subset").get<std::vector<int>>();
        for (const auto& tree_doc : doc.at("trees")) {
            DecisionTree tree;
            tree_from_json(tree_doc, tree);
            forest.trees.push_back(std::move(tree));
        }
        return forest;
    } catch (const json::exception& e) {
        fail("SchemaMismatch", std::string("forest JSON: ") + e.what());
    }
}

void save_forest(const RandomForest& forest, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoError", "cannot write " + path);
    out << forest_to_json(forest);
}

RandomForest load_forest(const std::string& path) { return forest_from_json(read_file(path)); }

}  // namespace textcomp
