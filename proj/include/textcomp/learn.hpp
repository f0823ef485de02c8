#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "textcomp/datasets.hpp"

namespace textcomp {

struct ForestParams {
    int n_trees = 100;
    std::optional<int> max_depth;  // unlimited when absent
    int min_leaf = 1;
    int features_per_split = 4;    // ceil(sqrt(16)); capped at the active subset size
    std::uint64_t seed = 0;
};

struct TreeNode {
    // Leaf when feature < 0; otherwise value <= threshold routes left.
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::int64_t n_same = 0;
    std::int64_t n_diff = 0;

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    // (p_same, p_diff) at the leaf the vector routes to.
    std::pair<double, double> leaf_distribution(const std::array<double, kFeatureCount>& v) const;
};

struct RandomForest {
    ForestParams params;
    std::vector<int> feature_subset;  // sorted feature indices the forest may split on
    std::vector<DecisionTree> trees;
};

// Shannon entropy in bits of a binary count pair; 0 log 0 := 0.
// Error kind: EmptyCounts when both are zero.
double entropy(std::int64_t count_same, std::int64_t count_diff);

struct SplitResult {
    std::optional<double> threshold;  // absent for a constant feature
    double gain = 0.0;
};

// Best information-gain threshold for one feature, scanning midpoints
// between consecutive distinct sorted values; ties go to the smaller
// threshold. A constant feature yields gain 0 and no threshold.
SplitResult best_split(const std::vector<const PairInstance*>& data, int feature);

// Bootstrap + random-feature-subset trees with greedy entropy splits.
// Tree t draws all randomness from derive_seed(params.seed, t), so results
// do not depend on scheduling. `subset` (default: all 16) restricts the
// features the forest may use. Error kind: EmptyDataset.
RandomForest train_forest(const PairDataset& ds, const ForestParams& params,
                          const std::vector<int>& subset = {});

// Averages leaf class distributions across trees; exact tie goes to Same.
PairLabel predict(const RandomForest& forest, const std::array<double, kFeatureCount>& v);

struct CVResult {
    std::vector<double> fold_accuracies;
    double mean = 0.0;
    std::vector<int> feature_subset;
};

// Stratified k-fold cross-validation, shuffled by params.seed. Fold sizes
// differ by at most one instance overall and per class. An empty `subset`
// runs the majority-class baseline instead of a forest.
// Error kind: TooFewInstances.
CVResult cross_validate(const PairDataset& ds, const ForestParams& params, int k = 10,
                        const std::optional<std::vector<int>>& subset = std::nullopt);

struct TTestResult {
    double t_stat = 0.0;
    double df = 0.0;
    double p_value = 1.0;
    bool significant_decrease = false;  // p < 0.1 and mean(a) < mean(b)
};

// Welch's unequal-variance two-sample t-test, two-tailed p via the
// regularized incomplete beta function. Both samples need >= 2 values.
// When both variances are zero: p = 1 if the means agree, else p = 0.
// Error kind: DegenerateSamples (fewer than 2 values in a sample).
TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

// Regularized incomplete beta I_x(a, b) (exposed for tests).
double incomplete_beta(double a, double b, double x);

// Per-feature information gain at the feature's best single threshold,
// sorted descending; ties broken by feature index. Error kind: EmptyDataset.
std::vector<std::pair<int, double>> rank_information_gain(const PairDataset& ds);

// JSON round-trip reproduces bit-identical predictions.
std::string forest_to_json(const RandomForest& forest);
RandomForest forest_from_json(const std::string& json_text);
void save_forest(const RandomForest& forest, const std::string& path);
RandomForest load_forest(const std::string& path);

std::vector<int> all_features();

}  // namespace textcomp
