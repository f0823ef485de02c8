#include "textcomp/features.hpp"

#include <cctype>
#include <fstream>

#include "textcomp/csv.hpp"
#include "textcomp/error.hpp"

namespace textcomp {

namespace {

// Pronoun fallback for untagged tokens; tagged tokens use ctx.pronoun_tags.
const std::set<std::string>& pronoun_words() {
    static const std::set<std::string> words = {
        "i",      "you",     "he",      "she",        "it",       "we",        "they",
        "me",     "him",     "her",     "us",         "them",     "my",        "your",
        "his",    "its",     "our",     "their",      "mine",     "yours",     "hers",
        "ours",   "theirs",  "myself",  "yourself",   "himself",  "herself",   "itself",
        "ourselves", "yourselves", "themselves", "who", "whom",   "whose",     "what",
        "which",
    };
    return words;
}

std::string lower(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_word(const std::string& surface) {
    for (char c : surface) {
        unsigned char u = static_cast<unsigned char>(c);
        if (u >= 0x80 || std::isalnum(u)) return true;  // non-ASCII bytes count as letters
    }
    return false;
}

std::vector<std::string> sentence_words(const Sentence& sentence) {
    std::vector<std::string> words;
    for (const auto& token : sentence.tokens) {
        if (is_word(token.surface)) words.push_back(lower(token.surface));
    }
    return words;
}

// label up to the first function-tag separator; labels that start with '-'
// (-LRB-, -NONE-) are kept whole
std::string base_label(const std::string& label) {
    if (label.empty() || label[0] == '-') return label;
    const std::size_t cut = label.find_first_of("-=");
    return cut == std::string::npos ? label : label.substr(0, cut);
}

std::int64_t count_label(const ParseTree& tree, const std::string& target) {
    std::int64_t n = base_label(tree.label) == target ? 1 : 0;
    for (const auto& child : tree.children) n += count_label(*child, target);
    return n;
}

}  // namespace

const std::array<std::string, kFeatureCount>& feature_short_names() {
    static const std::array<std::string, kFeatureCount> names = {
        "f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8",
        "f9", "f10", "f11", "f12", "f13", "f14", "f15", "f16"};
    return names;
}

const std::array<std::string, kFeatureCount>& feature_long_names() {
    static const std::array<std::string, kFeatureCount> names = {
        "log_score_realization_sense",
        "log_score_sense_marker",
        "log_score_realization_sense_marker",
        "relations_per_sentence",
        "pronouns_per_sentence",
        "definite_articles_per_sentence",
        "word_count",
        "chars_per_word",
        "words_per_sentence",
        "word_overlap_per_sentence_pair",
        "synonyms_per_word",
        "relative_frequency_per_word",
        "verb_phrases_per_sentence",
        "noun_phrases_per_sentence",
        "subordinate_clauses_per_sentence",
        "parse_tree_height",
    };
    return names;
}

const std::vector<int>& feature_class_indices(FeatureClass cls) {
    static const std::vector<int> coherence = {0, 1, 2, 3};
    static const std::vector<int> cohesion = {4, 5};
    static const std::vector<int> surface = {6, 7, 8};
    static const std::vector<int> lexical = {9, 10, 11};
    static const std::vector<int> syntactic = {12, 13, 14, 15};
    switch (cls) {
        case FeatureClass::Coherence: return coherence;
        case FeatureClass::Cohesion: return cohesion;
        case FeatureClass::Surface: return surface;
        case FeatureClass::Lexical: return lexical;
        case FeatureClass::Syntactic: return syntactic;
    }
    return coherence;
}

const std::string& feature_class_name(FeatureClass cls) {
    static const std::array<std::string, 5> names = {"coherence", "cohesion", "surface",
                                                     "lexical", "syntactic"};
    return names[static_cast<int>(cls)];
}

const ProbabilityModel& ExtractionContext::model(EventKind kind) const {
    return models[static_cast<int>(kind)];
}

std::vector<std::string> word_tokens(const Article& article) {
    std::vector<std::string> words;
    for (const auto& sentence : article.sentences) {
        auto w = sentence_words(sentence);
        words.insert(words.end(), w.begin(), w.end());
    }
    return words;
}

FeatureVector extract_features(const Article& article, const ExtractionContext& ctx) {
    if (article.sentences.empty()) fail("EmptyArticle", article.id);
    for (const auto& sentence : article.sentences) {
        if (!sentence.tree) fail("MissingTrees", article.id);
    }

    FeatureVector fv;
    fv.article_id = article.id;
    const double n_sent = static_cast<double>(article.sentences.size());

    // coherence
    for (EventKind kind : {EventKind::RealizationSense, EventKind::SenseMarker,
                           EventKind::RealizationSenseMarker}) {
        fv.values[static_cast<int>(kind)] =
            log_score(ctx.model(kind), derive_events(article, kind));
    }
    fv.values[3] = static_cast<double>(article.relations.size()) / n_sent;

    // cohesion
    std::int64_t pronouns = 0;
    std::int64_t definites = 0;
    for (const auto& sentence : article.sentences) {
        for (const auto& token : sentence.tokens) {
            if (token.pos) {
                if (ctx.pronoun_tags.count(*token.pos)) pronouns++;
            } else if (pronoun_words().count(lower(token.surface))) {
                pronouns++;
            }
            if (lower(token.surface) == "the" && (!token.pos || *token.pos == "DT")) definites++;
        }
    }
    fv.values[4] = static_cast<double>(pronouns) / n_sent;
    fv.values[5] = static_cast<double>(definites) / n_sent;

    // surface
    const auto words = word_tokens(article);
    std::int64_t chars = 0;
    for (const auto& w : words) chars += static_cast<std::int64_t>(w.size());
    fv.values[6] = static_cast<double>(words.size());
    fv.values[7] = words.empty() ? 0.0 : static_cast<double>(chars) / static_cast<double>(words.size());
    fv.values[8] = static_cast<double>(words.size()) / n_sent;

    // lexical
    double overlap = 0.0;
    std::set<std::string> prev_types;
    for (std::size_t i = 0; i < article.sentences.size(); ++i) {
        auto w = sentence_words(article.sentences[i]);
        std::set<std::string> types(w.begin(), w.end());
        if (i > 0) {
            for (const auto& t : types) {
                if (prev_types.count(t)) overlap += 1.0;
            }
        }
        prev_types = std::move(types);
    }
    fv.values[9] = overlap / std::max<double>(1.0, n_sent - 1.0);
    double synonyms = 0.0;
    double frequency = 0.0;
    for (const auto& w : words) {
        synonyms += ctx.synonym_lexicon.value(w);       // missing word -> 0, still counted
        frequency += ctx.frequency_lexicon.relative(w);
    }
    fv.values[10] = words.empty() ? 0.0 : synonyms / static_cast<double>(words.size());
    fv.values[11] = words.empty() ? 0.0 : frequency / static_cast<double>(words.size());

    // syntactic
    std::int64_t vps = 0;
    std::int64_t nps = 0;
    std::int64_t sbars = 0;
    std::int64_t height = 0;
    for (const auto& sentence : article.sentences) {
        vps += count_label(*sentence.tree, "VP");
        nps += count_label(*sentence.tree, "NP");
        sbars += count_label(*sentence.tree, "SBAR");
        height += sentence.tree->height();
    }
    fv.values[12] = static_cast<double>(vps) / n_sent;
    fv.values[13] = static_cast<double>(nps) / n_sent;
    fv.values[14] = static_cast<double>(sbars) / n_sent;
    fv.values[15] = static_cast<double>(height) / n_sent;
    return fv;
}

PairVector pair_difference(const FeatureVector& a, const FeatureVector& b) {
    PairVector pv;
    for (int i = 0; i < kFeatureCount; ++i) pv.deltas[i] = a.values[i] - b.values[i];
    pv.id_a = a.article_id;
    pv.id_b = b.article_id;
    return pv;
}

void write_features_csv(const std::vector<FeatureVector>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoError", "cannot write " + path);
    std::vector<std::string> header = {"article_id"};
    for (const auto& name : feature_short_names()) header.push_back(name);
    out << csv_join(header) << "\n";
    for (const auto& row : rows) {
        std::vector<std::string> fields = {row.article_id};
        for (double v : row.values) fields.push_back(format_double(v, 9));
        out << csv_join(fields) << "\n";
    }
}

}  // namespace textcomp
