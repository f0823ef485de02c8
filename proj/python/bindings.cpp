#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "textcomp/corpus.hpp"
#include "textcomp/datasets.hpp"
#include "textcomp/discourse_stats.hpp"
#include "textcomp/error.hpp"
#include "textcomp/features.hpp"
#include "textcomp/learn.hpp"

namespace py = pybind11;
using namespace textcomp;

namespace {

// python-friendly tree view: nested (label, children) / (label, word) tuples
py::object tree_to_py(const ParseTree& tree) {
    if (tree.is_leaf()) return py::make_tuple(tree.label, tree.token->surface);
    py::list children;
    for (const auto& child : tree.children) children.append(tree_to_py(*child));
    return py::make_tuple(tree.label, children);
}

EventCounts events_from_py(EventKind kind, const std::vector<std::pair<std::vector<std::string>, std::int64_t>>& rows) {
    EventCounts events;
    for (const auto& [parts, count] : rows) events[Event{kind, parts}] += count;
    return events;
}

std::vector<std::pair<std::vector<std::string>, std::int64_t>> events_to_py(const EventCounts& events) {
    std::vector<std::pair<std::vector<std::string>, std::int64_t>> rows;
    for (const auto& [event, count] : events) rows.emplace_back(event.parts, count);
    return rows;
}

std::array<double, kFeatureCount> to_feature_array(const std::vector<double>& values) {
    if (values.size() != kFeatureCount) {
        throw py::value_error("expected exactly 16 feature values");
    }
    std::array<double, kFeatureCount> out{};
    std::copy(values.begin(), values.end(), out.begin());
    return out;
}

}  // namespace

PYBIND11_MODULE(_textcomp, m) {
    m.doc() = "pairwise text-complexity assessment toolkit";

    py::register_exception<Error>(m, "TextcompError");

    py::enum_<Realization>(m, "Realization")
        .value("Explicit", Realization::Explicit)
        .value("Implicit", Realization::Implicit);
    py::enum_<Level>(m, "Level")
        .value("Simple", Level::Simple)
        .value("Complex", Level::Complex);
    py::enum_<EventKind>(m, "EventKind")
        .value("RealizationSense", EventKind::RealizationSense)
        .value("SenseMarker", EventKind::SenseMarker)
        .value("RealizationSenseMarker", EventKind::RealizationSenseMarker);
    py::enum_<PairLabel>(m, "PairLabel")
        .value("Same", PairLabel::Same)
        .value("Different", PairLabel::Different);

    py::class_<Token>(m, "Token")
        .def_readonly("surface", &Token::surface)
        .def_readonly("pos", &Token::pos);

    py::class_<DiscourseRelation>(m, "DiscourseRelation")
        .def(py::init([](Realization realization, const std::string& sense,
                         const std::optional<std::string>& marker) {
                 auto parsed = parse_sense(sense);
                 if (!parsed) throw py::value_error("unknown sense '" + sense + "'");
                 if (realization == Realization::Explicit && !marker) {
                     throw py::value_error("explicit relations need a marker");
                 }
                 return DiscourseRelation{realization, *parsed, marker};
             }),
             py::arg("realization"), py::arg("sense"), py::arg("marker") = std::nullopt)
        .def_readonly("realization", &DiscourseRelation::realization)
        .def_property_readonly("sense",
                               [](const DiscourseRelation& r) { return sense_name(r.sense); })
        .def_readonly("marker", &DiscourseRelation::marker);

    py::class_<Article>(m, "Article")
        .def_property_readonly("id", [](const Article& a) { return a.id; })
        .def_readonly("score", &Article::score)
        .def_readonly("level", &Article::level)
        .def_readonly("relations", &Article::relations)
        .def_property_readonly("sentence_count",
                               [](const Article& a) { return a.sentences.size(); })
        .def_property_readonly("sentences", [](const Article& a) {
            py::list out;
            for (const auto& s : a.sentences) {
                py::list tokens;
                for (const auto& t : s.tokens) tokens.append(t.surface);
                out.append(py::make_tuple(tokens, s.tree ? tree_to_py(*s.tree) : py::object(py::none())));
            }
            return out;
        });

    py::class_<Lexicon>(m, "Lexicon")
        .def_readonly("entries", &Lexicon::entries)
        .def_readonly("total", &Lexicon::total)
        .def("value", &Lexicon::value)
        .def("relative", &Lexicon::relative);

    m.def("parse_bracketed_tree",
          [](const std::string& text) { return tree_to_py(*parse_bracketed_tree(text)); });
    m.def("tree_to_string",
          [](const std::string& text) { return parse_bracketed_tree(text)->to_string(); },
          "canonical bracketed form of a parseable tree");
    m.def("parse_discourse_file", &parse_discourse_file, py::arg("text"),
          py::arg("path") = "<string>");
    m.def("load_manifest", &load_manifest);
    m.def("load_lexicon", &load_lexicon);
    m.def("tokenize_line", [](const std::string& line) {
        std::vector<std::string> out;
        for (const auto& token : tokenize_line(line)) out.push_back(token.surface);
        return out;
    });

    py::class_<ProbabilityModel>(m, "ProbabilityModel")
        .def_readonly("kind", &ProbabilityModel::kind)
        .def_readonly("event_total", &ProbabilityModel::event_total)
        .def_readonly("vocab_size", &ProbabilityModel::vocab_size)
        .def_readonly("n_total", &ProbabilityModel::n_total)
        .def_readonly("alpha", &ProbabilityModel::alpha)
        .def("to_json", &model_to_json);

    m.def("derive_events", [](const Article& article, EventKind kind) {
        return events_to_py(derive_events(article, kind));
    });
    m.def("fit_model", &fit_model, py::arg("articles"), py::arg("kind"), py::arg("alpha") = 1.0);
    m.def("event_prob", [](const ProbabilityModel& model, const std::vector<std::string>& parts) {
        return event_prob(model, Event{model.kind, parts});
    });
    m.def("n_prob", &n_prob);
    m.def("log_score", [](const ProbabilityModel& model,
                          const std::vector<std::pair<std::vector<std::string>, std::int64_t>>& events) {
        return log_score(model, events_from_py(model.kind, events));
    });
    m.def("multinomial_pmf", [](const ProbabilityModel& model,
                                const std::vector<std::pair<std::vector<std::string>, std::int64_t>>& events) {
        return multinomial_pmf(model, events_from_py(model.kind, events));
    });
    m.def("model_from_json", &model_from_json);
    m.def("save_model", &save_model);
    m.def("load_model", &load_model);

    py::class_<FeatureVector>(m, "FeatureVector")
        .def(py::init([](const std::vector<double>& values, const std::string& article_id) {
                 FeatureVector fv;
                 fv.values = to_feature_array(values);
                 fv.article_id = article_id;
                 return fv;
             }),
             py::arg("values"), py::arg("article_id") = "")
        .def_property_readonly("values",
                               [](const FeatureVector& fv) {
                                   return std::vector<double>(fv.values.begin(), fv.values.end());
                               })
        .def_readonly("article_id", &FeatureVector::article_id);

    py::class_<PairVector>(m, "PairVector")
        .def_property_readonly("deltas",
                               [](const PairVector& pv) {
                                   return std::vector<double>(pv.deltas.begin(), pv.deltas.end());
                               })
        .def_readonly("id_a", &PairVector::id_a)
        .def_readonly("id_b", &PairVector::id_b);

    py::class_<ExtractionContext>(m, "ExtractionContext")
        .def(py::init([](const ProbabilityModel& realization_sense, const ProbabilityModel& sense_marker,
                         const ProbabilityModel& realization_sense_marker, const Lexicon& synonyms,
                         const Lexicon& frequencies) {
                 ExtractionContext ctx;
                 ctx.models = {realization_sense, sense_marker, realization_sense_marker};
                 ctx.synonym_lexicon = synonyms;
                 ctx.frequency_lexicon = frequencies;
                 return ctx;
             }),
             py::arg("realization_sense"), py::arg("sense_marker"),
             py::arg("realization_sense_marker"), py::arg("synonyms"), py::arg("frequencies"));

    m.def("feature_names", [] {
        const auto& names = feature_long_names();
        return std::vector<std::string>(names.begin(), names.end());
    });
    m.def("word_tokens", &word_tokens);
    m.def("extract_features", &extract_features);
    m.def("pair_difference", &pair_difference);

    py::class_<PairInstance>(m, "PairInstance")
        .def_readonly("vector", &PairInstance::vector)
        .def_readonly("label", &PairInstance::label);

    py::class_<PairDataset>(m, "PairDataset")
        .def_readonly("instances", &PairDataset::instances)
        .def("__len__", &PairDataset::size);

    py::class_<ScoredVector>(m, "ScoredVector")
        .def(py::init([](const FeatureVector& vector, double score) {
                 return ScoredVector{vector, score};
             }),
             py::arg("vector"), py::arg("score"));
    py::class_<AlignedVectors>(m, "AlignedVectors")
        .def(py::init([](const FeatureVector& complex_vector, const FeatureVector& simple_vector) {
                 return AlignedVectors{complex_vector, simple_vector};
             }),
             py::arg("complex_vector"), py::arg("simple_vector"));

    m.def("build_threshold_pairs", &build_threshold_pairs);
    m.def("balance_threshold", &balance_threshold);
    m.def("build_aligned_pairs", &build_aligned_pairs);
    m.def("write_dataset", &write_dataset);
    m.def("read_dataset", &read_dataset);

    py::class_<ForestParams>(m, "ForestParams")
        .def(py::init([](int n_trees, std::optional<int> max_depth, int min_leaf,
                         int features_per_split, std::uint64_t seed) {
                 return ForestParams{n_trees, max_depth, min_leaf, features_per_split, seed};
             }),
             py::arg("n_trees") = 100, py::arg("max_depth") = std::nullopt,
             py::arg("min_leaf") = 1, py::arg("features_per_split") = 4, py::arg("seed") = 0)
        .def_readonly("n_trees", &ForestParams::n_trees)
        .def_readonly("seed", &ForestParams::seed);

    py::class_<RandomForest>(m, "RandomForest")
        .def_property_readonly("n_trees",
                               [](const RandomForest& f) { return f.trees.size(); })
        .def_readonly("feature_subset", &RandomForest::feature_subset)
        .def("to_json", &forest_to_json);

    py::class_<CVResult>(m, "CVResult")
        .def_readonly("fold_accuracies", &CVResult::fold_accuracies)
        .def_readonly("mean", &CVResult::mean)
        .def_readonly("feature_subset", &CVResult::feature_subset);

    py::class_<TTestResult>(m, "TTestResult")
        .def_readonly("t_stat", &TTestResult::t_stat)
        .def_readonly("df", &TTestResult::df)
        .def_readonly("p_value", &TTestResult::p_value)
        .def_readonly("significant_decrease", &TTestResult::significant_decrease);

    m.def("entropy", &entropy);
    m.def("train_forest", &train_forest, py::arg("dataset"), py::arg("params"),
          py::arg("subset") = std::vector<int>{});
    m.def("predict", [](const RandomForest& forest, const std::vector<double>& vector) {
        return predict(forest, to_feature_array(vector));
    });
    m.def("cross_validate", &cross_validate, py::arg("dataset"), py::arg("params"),
          py::arg("k") = 10, py::arg("subset") = std::nullopt);
    m.def("welch_t_test", &welch_t_test);
    m.def("rank_information_gain", &rank_information_gain);
    m.def("forest_from_json", &forest_from_json);
    m.def("save_forest", &save_forest);
    m.def("load_forest", &load_forest);
}
