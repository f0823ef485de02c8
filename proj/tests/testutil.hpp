#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "textcomp/corpus.hpp"
#include "textcomp/datasets.hpp"
#include "textcomp/discourse_stats.hpp"
#include "textcomp/features.hpp"
#include "textcomp/rng.hpp"

#ifndef TEXTCOMP_DATA_DIR
#define TEXTCOMP_DATA_DIR "data"
#endif

namespace testutil {

inline std::filesystem::path data_dir() { return std::filesystem::path(TEXTCOMP_DATA_DIR); }

// fresh scratch directory per test binary run
inline std::filesystem::path temp_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("textcomp_" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + unit * (hi - lo);
}

inline textcomp::DiscourseRelation relation(textcomp::Realization r, textcomp::Sense s,
                                            const std::string& marker = "") {
    textcomp::DiscourseRelation rel{r, s, std::nullopt};
    if (!marker.empty()) rel.marker = marker;
    return rel;
}

inline textcomp::Sentence tree_sentence(const std::string& bracketed) {
    auto tree = textcomp::parse_bracketed_tree(bracketed);
    std::vector<textcomp::Token> tokens;
    tree->collect_tokens(tokens);
    return textcomp::Sentence(std::move(tokens), std::move(tree));
}

inline textcomp::Article make_article(const std::string& id,
                                      const std::vector<std::string>& trees,
                                      std::vector<textcomp::DiscourseRelation> relations = {},
                                      std::optional<double> score = std::nullopt) {
    textcomp::Article article;
    article.id = id;
    for (const auto& t : trees) article.sentences.push_back(tree_sentence(t));
    article.relations = std::move(relations);
    article.score = score;
    return article;
}

inline textcomp::Lexicon make_lexicon(std::initializer_list<std::pair<std::string, double>> items) {
    textcomp::Lexicon lex;
    for (const auto& [word, value] : items) {
        lex.entries[word] += value;
        lex.total += value;
    }
    return lex;
}

inline textcomp::ExtractionContext make_context(const std::vector<textcomp::Article>& corpus,
                                                double alpha = 1.0) {
    textcomp::ExtractionContext ctx;
    for (textcomp::EventKind kind :
         {textcomp::EventKind::RealizationSense, textcomp::EventKind::SenseMarker,
          textcomp::EventKind::RealizationSenseMarker}) {
        ctx.models[static_cast<int>(kind)] = textcomp::fit_model(corpus, kind, alpha);
    }
    ctx.synonym_lexicon = make_lexicon({{"the", 2}, {"dog", 5}, {"cat", 4}, {"ran", 3}});
    ctx.frequency_lexicon = make_lexicon({{"the", 1000}, {"dog", 50}, {"cat", 40}, {"ran", 10}});
    return ctx;
}

// Model with event probabilities exactly 0.6/0.4 and P(3) exactly 0.5:
// counts 3 and 2 over total 5 with alpha ~ 0 keeps the ratios exact in
// double arithmetic, and n_counts {3:2, 5:1} gives (2+1)/(3+2+1) = 1/2.
inline textcomp::ProbabilityModel toy_model() {
    using namespace textcomp;
    ProbabilityModel model;
    model.kind = EventKind::RealizationSense;
    model.event_counts[{EventKind::RealizationSense, {"explicit", "contrast"}}] = 3;
    model.event_counts[{EventKind::RealizationSense, {"implicit", "cause"}}] = 2;
    model.event_total = 5;
    model.vocab_size = 3;
    model.alpha = 1e-300;
    model.n_counts = {{3, 2}, {5, 1}};
    model.n_total = 3;
    return model;
}

inline textcomp::Event toy_event_a() {
    return {textcomp::EventKind::RealizationSense, {"explicit", "contrast"}};
}
inline textcomp::Event toy_event_b() {
    return {textcomp::EventKind::RealizationSense, {"implicit", "cause"}};
}

inline textcomp::PairInstance make_instance(const std::array<double, 16>& deltas,
                                            textcomp::PairLabel label, int serial) {
    textcomp::PairInstance inst;
    inst.vector.deltas = deltas;
    inst.vector.id_a = "a_" + std::to_string(serial);
    inst.vector.id_b = "b_" + std::to_string(serial);
    inst.label = label;
    return inst;
}

// Label decided by the sign of one feature: delta > 0 <=> Different.
inline textcomp::PairDataset signed_planted_dataset(int n, int signal_feature,
                                                    std::uint64_t seed) {
    using namespace textcomp;
    PairDataset ds;
    const auto& names = feature_short_names();
    ds.feature_names = {names.begin(), names.end()};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < n; ++i) {
        std::array<double, 16> deltas{};
        for (int f = 0; f < 16; ++f) deltas[f] = uniform(rng, -2.0, 2.0);
        const bool different = (i % 2) == 0;
        deltas[signal_feature] = different ? uniform(rng, 0.1, 2.0) : uniform(rng, -2.0, -0.1);
        ds.instances.push_back(
            make_instance(deltas, different ? PairLabel::Different : PairLabel::Same, i));
    }
    return ds;
}

// Magnitude signal (|delta| large <=> Different) with optional label noise.
inline textcomp::PairDataset planted_dataset(int n, int signal_feature, double noise_rate,
                                             std::uint64_t seed) {
    using namespace textcomp;
    PairDataset ds;
    const auto& names = feature_short_names();
    ds.feature_names = {names.begin(), names.end()};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < n; ++i) {
        std::array<double, 16> deltas{};
        for (int f = 0; f < 16; ++f) deltas[f] = uniform(rng, -2.0, 2.0);
        const bool different = (i % 2) == 0;
        const double magnitude = different ? uniform(rng, 1.0, 2.0) : uniform(rng, 0.0, 0.5);
        deltas[signal_feature] = (rng() & 1) ? magnitude : -magnitude;
        bool label_different = different;
        if (uniform(rng, 0.0, 1.0) < noise_rate) label_different = !label_different;
        ds.instances.push_back(
            make_instance(deltas, label_different ? PairLabel::Different : PairLabel::Same, i));
    }
    return ds;
}

}  // namespace testutil
