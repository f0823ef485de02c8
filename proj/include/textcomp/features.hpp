#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "textcomp/corpus.hpp"
#include "textcomp/discourse_stats.hpp"

namespace textcomp {

inline constexpr int kFeatureCount = 16;

// Short names f1..f16 in canonical order.
const std::array<std::string, kFeatureCount>& feature_short_names();
// Descriptive names, e.g. "log_score_realization_sense".
const std::array<std::string, kFeatureCount>& feature_long_names();

// The five feature classes and their (0-based) feature indices.
enum class FeatureClass { Coherence, Cohesion, Surface, Lexical, Syntactic };
const std::vector<int>& feature_class_indices(FeatureClass cls);
const std::string& feature_class_name(FeatureClass cls);

struct FeatureVector {
    std::array<double, kFeatureCount> values{};
    std::string article_id;
};

struct PairVector {
    std::array<double, kFeatureCount> deltas{};
    std::string id_a;
    std::string id_b;
};

// Everything extraction needs besides the article itself: the three fitted
// event models (indexed by EventKind) and the two lexicons.
struct ExtractionContext {
    std::array<ProbabilityModel, 3> models;  // [RealizationSense, SenseMarker, RealizationSenseMarker]
    Lexicon synonym_lexicon;
    Lexicon frequency_lexicon;
    std::set<std::string> pronoun_tags = {"PRP", "PRP$", "WP", "WP$"};

    const ProbabilityModel& model(EventKind kind) const;
};

// Lowercase surfaces of tokens that contain at least one letter or digit;
// punctuation-only tokens are dropped, order preserved.
std::vector<std::string> word_tokens(const Article& article);

// Computes f1..f16:
//   f1-f3  log_score under the matching event model
//   f4     relations per sentence
//   f5/f6  pronouns / definite articles per sentence
//   f7-f9  word count, chars per word, words per sentence
//   f10    shared word types between consecutive sentences
//   f11/f12 mean synonym-lexicon value / mean relative corpus frequency
//   f13-f15 VP / NP / SBAR nodes per sentence
//   f16    mean parse-tree height
// Error kinds: MissingTrees (f13-f16 need a tree on every sentence),
// EmptyArticle.
FeatureVector extract_features(const Article& article, const ExtractionContext& ctx);

// Componentwise a - b.
PairVector pair_difference(const FeatureVector& a, const FeatureVector& b);

// `article_id,f1,...,f16` CSV, values with 9 significant digits.
void write_features_csv(const std::vector<FeatureVector>& rows, const std::string& path);

}  // namespace textcomp
