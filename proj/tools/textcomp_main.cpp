// textcomp: pairwise text-complexity experiments over annotated articles.
//
// Subcommands: fit-stats, extract, pair, evaluate, rank. Every command is
// deterministic given its config and seed; reruns overwrite outputs
// byte-identically. Exit codes: 0 success, 1 usage error, 2 data error.

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "textcomp/csv.hpp"
#include "textcomp/datasets.hpp"
#include "textcomp/discourse_stats.hpp"
#include "textcomp/error.hpp"
#include "textcomp/features.hpp"
#include "textcomp/learn.hpp"

namespace fs = std::filesystem;
using namespace textcomp;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// flat `key = value` config file; '#' comments
std::map<std::string, std::string> parse_config_file(const std::string& path) {
    static const std::set<std::string> known = {
        "manifest", "synonyms",  "frequencies",     "alpha",   "threshold",
        "pairs_per_class", "n_trees", "max_depth", "min_leaf", "features_per_split",
        "seed",     "k_folds",   "out",             "models",  "data"};
    auto trim = [](std::string s) {
        const auto begin = s.find_first_not_of(" \t");
        const auto end = s.find_last_not_of(" \t");
        return begin == std::string::npos ? std::string() : s.substr(begin, end - begin + 1);
    };
    std::map<std::string, std::string> cfg;
    std::ifstream in(path);
    if (!in) fail("FileMissing", path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw UsageError(at_line(path, lineno) + "expected key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (!known.count(key)) {
            throw UsageError(at_line(path, lineno) + "unknown config key '" + key + "'");
        }
        cfg[key] = value;
    }
    return cfg;
}

// precedence: flag > config > default
template <typename T>
T pick(const std::optional<T>& flag, const std::map<std::string, std::string>& cfg,
       const std::string& key, const T& fallback);

template <typename T>
T parse_value(const std::string& text, const std::string& key) {
    if constexpr (std::is_same_v<T, std::string>) {
        return text;
    } else {
        T value{};
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw UsageError("config key '" + key + "': cannot parse '" + text + "'");
        }
        return value;
    }
}

template <typename T>
T pick(const std::optional<T>& flag, const std::map<std::string, std::string>& cfg,
       const std::string& key, const T& fallback) {
    if (flag) return *flag;
    auto it = cfg.find(key);
    if (it != cfg.end()) return parse_value<T>(it->second, key);
    return fallback;
}

// flags shared by every subcommand, resolved against the config file
struct CommonArgs {
    std::optional<std::string> config;
    std::optional<std::string> manifest;
    std::optional<std::string> synonyms;
    std::optional<std::string> frequencies;
    std::optional<std::string> out;
    std::optional<std::string> models;
    std::optional<std::string> data;
    std::optional<double> alpha;
    std::optional<std::uint64_t> seed;
    std::optional<int> k_folds;
    std::optional<int> n_trees;
    std::optional<int> max_depth;
    std::optional<int> min_leaf;
    std::optional<int> features_per_split;

    std::map<std::string, std::string> cfg;

    void load_config() {
        if (config) cfg = parse_config_file(*config);
    }
    std::string out_dir() const { return pick(out, cfg, "out", std::string(".")); }
    std::string models_dir() const { return pick(models, cfg, "models", out_dir()); }
    std::string data_path() const {
        return pick(data, cfg, "data", (fs::path(out_dir()) / "pairs.csv").string());
    }
    std::string manifest_path() const {
        const std::string path = pick(manifest, cfg, "manifest", std::string());
        if (path.empty()) throw UsageError("a manifest is required (--manifest or config)");
        return path;
    }
    double alpha_value() const { return pick(alpha, cfg, "alpha", 1.0); }
    std::uint64_t seed_value(const char* command) const {
        if (!seed && !cfg.count("seed")) {
            throw UsageError(std::string("--seed is required for ") + command);
        }
        return pick(seed, cfg, "seed", std::uint64_t{0});
    }
    ForestParams forest_params(std::uint64_t seed_value) const {
        ForestParams params;
        params.n_trees = pick(n_trees, cfg, "n_trees", 100);
        const int depth = pick(max_depth, cfg, "max_depth", 0);  // 0 = unlimited
        if (depth > 0) params.max_depth = depth;
        params.min_leaf = pick(min_leaf, cfg, "min_leaf", 1);
        params.features_per_split = pick(features_per_split, cfg, "features_per_split", 4);
        params.seed = seed_value;
        return params;
    }
};

void add_common_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "flat key = value config file");
    cmd->add_option("--out", args.out, "output directory (default .)");
    cmd->add_option("--seed", args.seed, "RNG seed");
}

void add_corpus_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--manifest", args.manifest, "article manifest TSV");
    cmd->add_option("--synonyms", args.synonyms, "synonym-count lexicon TSV");
    cmd->add_option("--frequencies", args.frequencies, "corpus-frequency lexicon TSV");
    cmd->add_option("--models", args.models, "directory with fitted model JSON files");
}

void add_forest_flags(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--n-trees", args.n_trees, "trees per forest (default 100)");
    cmd->add_option("--max-depth", args.max_depth, "tree depth cap, 0 = unlimited");
    cmd->add_option("--min-leaf", args.min_leaf, "minimum instances per leaf");
    cmd->add_option("--features-per-split", args.features_per_split,
                    "features sampled at each node (default 4)");
    cmd->add_option("--folds", args.k_folds, "cross-validation folds (default 10)");
}

std::string model_filename(EventKind kind) {
    return "model_" + event_kind_name(kind) + ".json";
}

fs::path ensure_out_dir(const CommonArgs& args) {
    const fs::path dir(args.out_dir());
    fs::create_directories(dir);
    return dir;
}

ExtractionContext load_context(const CommonArgs& args) {
    ExtractionContext ctx;
    const fs::path models(args.models_dir());
    for (EventKind kind : {EventKind::RealizationSense, EventKind::SenseMarker,
                           EventKind::RealizationSenseMarker}) {
        ctx.models[static_cast<int>(kind)] = load_model((models / model_filename(kind)).string());
        if (ctx.models[static_cast<int>(kind)].kind != kind) {
            fail("SchemaMismatch", model_filename(kind) + " holds the wrong event kind");
        }
    }
    const std::string synonyms = pick(args.synonyms, args.cfg, "synonyms", std::string());
    const std::string frequencies = pick(args.frequencies, args.cfg, "frequencies", std::string());
    if (synonyms.empty() || frequencies.empty()) {
        throw UsageError("both --synonyms and --frequencies lexicons are required");
    }
    ctx.synonym_lexicon = load_lexicon(synonyms);
    ctx.frequency_lexicon = load_lexicon(frequencies);
    return ctx;
}

// ---------------------------------------------------------------------------

int cmd_fit_stats(CommonArgs& args) {
    const auto articles = load_manifest(args.manifest_path());
    const fs::path out = ensure_out_dir(args);
    for (EventKind kind : {EventKind::RealizationSense, EventKind::SenseMarker,
                           EventKind::RealizationSenseMarker}) {
        const auto model = fit_model(articles, kind, args.alpha_value());
        const fs::path path = out / model_filename(kind);
        save_model(model, path.string());
        std::cout << "wrote " << path.string() << " (events " << model.event_total
                  << ", articles " << model.n_total << ")\n";
    }
    return 0;
}

int cmd_extract(CommonArgs& args) {
    const auto articles = load_manifest(args.manifest_path());
    const auto ctx = load_context(args);
    std::vector<FeatureVector> rows;
    rows.reserve(articles.size());
    for (const auto& article : articles) rows.push_back(extract_features(article, ctx));
    const fs::path path = ensure_out_dir(args) / "features.csv";
    write_features_csv(rows, path.string());
    std::cout << "wrote " << path.string() << " (" << rows.size() << " articles)\n";
    return 0;
}

struct PairArgs {
    std::string mode;
    std::optional<std::string> threshold;  // number or "auto"
    std::optional<std::size_t> pairs_per_class;
};

int cmd_pair(CommonArgs& args, PairArgs& pair_args) {
    const auto articles = load_manifest(args.manifest_path());
    const auto ctx = load_context(args);
    PairDataset ds;

    if (pair_args.mode == "threshold") {
        std::vector<ScoredVector> scored;
        std::vector<double> scores;
        for (const auto& article : articles) {
            if (!article.score) fail("MissingScores", article.id + " has no complexity score");
            scored.push_back({extract_features(article, ctx), *article.score});
            scores.push_back(*article.score);
        }
        const std::string spec =
            pick(pair_args.threshold, args.cfg, "threshold", std::string("0.7"));
        double threshold = 0.0;
        if (spec == "auto") {
            threshold = balance_threshold(scores);
            std::cout << "chosen threshold: " << format_double(threshold, 9) << "\n";
        } else {
            threshold = parse_value<double>(spec, "threshold");
        }
        ds = build_threshold_pairs(scored, threshold);
    } else if (pair_args.mode == "aligned") {
        const std::uint64_t seed = args.seed_value("pair --mode aligned");
        std::vector<FeatureVector> complex_vectors;
        std::vector<FeatureVector> simple_vectors;
        for (const auto& article : articles) {
            if (!article.level) fail("MissingAlignment", article.id + " has no simple/complex level");
            (*article.level == Level::Complex ? complex_vectors : simple_vectors)
                .push_back(extract_features(article, ctx));
        }
        if (complex_vectors.empty() || complex_vectors.size() != simple_vectors.size()) {
            fail("MissingAlignment",
                 "aligned mode pairs the i-th complex with the i-th simple article; got " +
                     std::to_string(complex_vectors.size()) + " complex vs " +
                     std::to_string(simple_vectors.size()) + " simple");
        }
        std::vector<AlignedVectors> aligned;
        for (std::size_t i = 0; i < complex_vectors.size(); ++i) {
            aligned.push_back({complex_vectors[i], simple_vectors[i]});
        }
        std::size_t ppc = 0;
        if (pair_args.pairs_per_class) {
            ppc = *pair_args.pairs_per_class;
        } else if (args.cfg.count("pairs_per_class")) {
            ppc = parse_value<std::size_t>(args.cfg.at("pairs_per_class"), "pairs_per_class");
        } else {
            throw UsageError("--pairs-per-class is required for aligned mode");
        }
        ds = build_aligned_pairs(aligned, ppc, seed);
    } else {
        throw UsageError("--mode must be threshold or aligned");
    }

    const fs::path path = ensure_out_dir(args) / "pairs.csv";
    write_dataset(ds, path.string());
    std::size_t same = 0;
    for (const auto& inst : ds.instances) {
        if (inst.label == PairLabel::Same) same++;
    }
    std::cout << "wrote " << path.string() << "\n"
              << "pairs of articles: " << ds.size() << "\n"
              << "positive (same):   " << same << "\n"
              << "negative (diff):   " << ds.size() - same << "\n";
    return 0;
}

// ---------------------------------------------------------------------------

struct FeatureSpec {
    std::string name;
    std::vector<int> subset;  // empty = majority baseline
};

std::optional<FeatureClass> class_by_name(const std::string& name) {
    for (FeatureClass cls : {FeatureClass::Coherence, FeatureClass::Cohesion,
                             FeatureClass::Surface, FeatureClass::Lexical,
                             FeatureClass::Syntactic}) {
        if (name == feature_class_name(cls)) return cls;
    }
    return std::nullopt;
}

FeatureSpec resolve_feature_spec(const std::string& raw) {
    std::string name = raw;
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (name == "baseline") return {name, {}};
    if (name == "all") return {name, all_features()};
    if (auto cls = class_by_name(name)) return {name, feature_class_indices(*cls)};
    if (name.rfind("all-minus-", 0) == 0) {
        auto cls = class_by_name(name.substr(10));
        if (cls) {
            const auto& removed = feature_class_indices(*cls);
            std::vector<int> subset;
            for (int f : all_features()) {
                if (std::find(removed.begin(), removed.end(), f) == removed.end()) {
                    subset.push_back(f);
                }
            }
            return {name, subset};
        }
    }
    if (name.rfind("single:f", 0) == 0) {
        int index = 0;
        const std::string digits = name.substr(8);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
        if (ec == std::errc() && ptr == digits.data() + digits.size() && index >= 1 &&
            index <= kFeatureCount) {
            return {name, {index - 1}};
        }
    }
    throw UsageError("UnknownFeatureSpec: '" + raw + "'");
}

std::vector<std::string> default_grid() {
    std::vector<std::string> grid = {"baseline", "all"};
    for (const char* cls : {"coherence", "cohesion", "surface", "lexical", "syntactic"}) {
        grid.push_back(cls);
    }
    for (const char* cls : {"coherence", "cohesion", "surface", "lexical", "syntactic"}) {
        grid.push_back(std::string("all-minus-") + cls);
    }
    return grid;
}

int cmd_evaluate(CommonArgs& args, std::vector<std::string>& feature_specs) {
    const std::uint64_t seed = args.seed_value("evaluate");
    const ForestParams params = args.forest_params(seed);
    const int k = pick(args.k_folds, args.cfg, "k_folds", 10);
    const PairDataset ds = read_dataset(args.data_path());

    std::vector<std::string> spec_names = feature_specs.empty() ? default_grid() : feature_specs;
    if (std::find(spec_names.begin(), spec_names.end(), "all") == spec_names.end()) {
        spec_names.insert(spec_names.begin(), "all");  // every p-value needs its reference
    }
    std::vector<FeatureSpec> specs;
    specs.reserve(spec_names.size());
    for (const auto& name : spec_names) specs.push_back(resolve_feature_spec(name));

    const CVResult all_result = cross_validate(ds, params, k, all_features());

    const fs::path report_path = ensure_out_dir(args) / "report.csv";
    std::ofstream report(report_path, std::ios::binary);
    if (!report) fail("IoError", "cannot write " + report_path.string());
    report << "config,n_features,mean_acc,p_value,verdict\n";
    std::printf("%-22s %10s %9s %8s %8s\n", "config", "n_features", "mean_acc", "p_value",
                "verdict");

    for (const auto& spec : specs) {
        CVResult result;
        if (spec.name == "all") {
            result = all_result;
        } else if (spec.subset.empty()) {
            result = cross_validate(ds, params, k, std::vector<int>{});
        } else {
            result = cross_validate(ds, params, k, spec.subset);
        }
        std::string p_text = "N/A";
        std::string verdict = "N/A";
        if (spec.name != "all") {
            const TTestResult test =
                welch_t_test(result.fold_accuracies, all_result.fold_accuracies);
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.4f", test.p_value);
            p_text = buf;
            verdict = test.significant_decrease ? "⇓" : "=";
        }
        char acc[32];
        std::snprintf(acc, sizeof(acc), "%.2f", result.mean * 100.0);
        report << csv_join({spec.name, std::to_string(spec.subset.size()), acc, p_text, verdict})
               << "\n";
        std::printf("%-22s %10zu %9s %8s %8s\n", spec.name.c_str(), spec.subset.size(), acc,
                    p_text.c_str(), verdict.c_str());
    }
    std::cout << "wrote " << report_path.string() << "\n";
    return 0;
}

int cmd_rank(CommonArgs& args) {
    const PairDataset ds = read_dataset(args.data_path());
    const auto ranking = rank_information_gain(ds);

    const fs::path path = ensure_out_dir(args) / "ranking.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoError", "cannot write " + path.string());
    out << "rank,feature,name,gain\n";
    std::printf("%4s  %-7s %-34s %s\n", "rank", "feature", "name", "gain");
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        const auto [feature, gain] = ranking[i];
        const std::string tag = "F" + std::to_string(feature + 1);
        const std::string& name = feature_long_names()[feature];
        const std::string gain_text = format_double(gain, 6);
        out << csv_join({std::to_string(i + 1), tag, name, gain_text}) << "\n";
        std::printf("%4zu  %-7s %-34s %s\n", i + 1, tag.c_str(), name.c_str(), gain_text.c_str());
    }
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pairwise text-complexity assessment toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    PairArgs pair_args;
    std::vector<std::string> feature_specs;

    CLI::App* fit = app.add_subcommand("fit-stats", "fit the three discourse event models");
    add_common_flags(fit, args);
    add_corpus_flags(fit, args);
    fit->add_option("--alpha", args.alpha, "add-alpha smoothing constant (default 1)");

    CLI::App* extract = app.add_subcommand("extract", "extract f1..f16 for every article");
    add_common_flags(extract, args);
    add_corpus_flags(extract, args);

    CLI::App* pair = app.add_subcommand("pair", "build a labeled pairwise dataset");
    add_common_flags(pair, args);
    add_corpus_flags(pair, args);
    pair->add_option("--mode", pair_args.mode, "threshold or aligned")->required();
    pair->add_option("--threshold", pair_args.threshold, "score gap threshold or 'auto'");
    pair->add_option("--pairs-per-class", pair_args.pairs_per_class,
                     "sampled pairs per label (aligned mode)");

    CLI::App* evaluate = app.add_subcommand("evaluate", "cross-validate feature subsets");
    add_common_flags(evaluate, args);
    add_forest_flags(evaluate, args);
    evaluate->add_option("--data", args.data, "pair dataset CSV");
    evaluate->add_option("--features", feature_specs,
                         "feature spec (repeatable): all, baseline, a class name, "
                         "all-minus-<class>, single:<Fi>; default: the full 12-row grid");

    CLI::App* rank = app.add_subcommand("rank", "rank features by information gain");
    add_common_flags(rank, args);
    rank->add_option("--data", args.data, "pair dataset CSV");

    try {
        app.parse(argc, argv);
        args.load_config();
        if (fit->parsed()) return cmd_fit_stats(args);
        if (extract->parsed()) return cmd_extract(args);
        if (pair->parsed()) return cmd_pair(args, pair_args);
        if (evaluate->parsed()) return cmd_evaluate(args, feature_specs);
        if (rank->parsed()) return cmd_rank(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
