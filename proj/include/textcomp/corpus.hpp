#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace textcomp {

struct Token {
    std::string surface;
    std::optional<std::string> pos;  // Penn tag when read from a parse tree
};

// Constituency tree node. A node either has children (constituent) or a
// token (preterminal leaf); never both. For a leaf, `label` is the POS tag
// and doubles as token.pos.
struct ParseTree {
    std::string label;
    std::vector<std::unique_ptr<ParseTree>> children;
    std::optional<Token> token;

    bool is_leaf() const { return token.has_value(); }
    std::size_t leaf_count() const;
    void collect_tokens(std::vector<Token>& out) const;
    // Height in edges of the longest root-to-token path; a bare
    // preterminal has height 1 (the edge down to its word).
    int height() const;
    // Canonical bracketed form; parses back to a structurally equal tree.
    std::string to_string() const;

    std::unique_ptr<ParseTree> clone() const;
};

bool tree_equal(const ParseTree& a, const ParseTree& b);

// Parses a single Penn-style bracketed tree, e.g.
//   (S (NP (PRP I)) (VP (VBD ran)))
// Error kinds: UnbalancedBrackets, EmptyConstituent, TrailingInput,
// MalformedTree (each reporting a byte offset).
std::unique_ptr<ParseTree> parse_bracketed_tree(const std::string& text);

struct Sentence {
    std::vector<Token> tokens;
    std::unique_ptr<ParseTree> tree;  // may be null when no tree file was given

    Sentence() = default;
    Sentence(std::vector<Token> t, std::unique_ptr<ParseTree> tr)
        : tokens(std::move(t)), tree(std::move(tr)) {}
    Sentence(const Sentence& other);
    Sentence& operator=(const Sentence& other);
    Sentence(Sentence&&) = default;
    Sentence& operator=(Sentence&&) = default;
};

enum class Realization { Explicit, Implicit };

// The 16 second-level PDTB senses.
enum class Sense {
    Asynchronous,
    Synchronous,
    Cause,
    PragmaticCause,
    Condition,
    PragmaticCondition,
    Contrast,
    PragmaticContrast,
    Concession,
    PragmaticConcession,
    Conjunction,
    Instantiation,
    Restatement,
    Alternative,
    Exception,
    List,
};
inline constexpr int kSenseCount = 16;

// Canonical lowercase name, e.g. "pragmatic_cause". Also the event-part
// spelling used by the probability models.
const std::string& sense_name(Sense s);
const std::string& realization_name(Realization r);

// Case-insensitive lookup; spaces/underscores/hyphens between words are
// ignored, so "Pragmatic Cause", "pragmatic_cause" and "PragmaticCause"
// all resolve. Returns nullopt for unknown tokens.
std::optional<Sense> parse_sense(const std::string& token);
std::optional<Realization> parse_realization(const std::string& token);

struct DiscourseRelation {
    Realization realization;
    Sense sense;
    std::optional<std::string> marker;  // lowercase; required for Explicit
};

// One relation per line: `Realization|Sense|marker`, `-` for no marker,
// `#` starts a comment line. Error kinds: UnknownSense, UnknownRealization,
// ExplicitWithoutMarker, MalformedLine.
std::vector<DiscourseRelation> parse_discourse_file(const std::string& text,
                                                    const std::string& path = "<string>");

enum class Level { Simple, Complex };

struct Article {
    std::string id;
    std::vector<Sentence> sentences;
    std::vector<DiscourseRelation> relations;
    std::optional<double> score;  // PDTB-style rating in [1.0, 5.0]
    std::optional<Level> level;   // SEW-style simple/complex
};

// Word-to-value table backing the synonym-count and corpus-frequency
// resources. Keys are lowercase; `total` caches the sum of all values.
struct Lexicon {
    std::map<std::string, double> entries;
    double total = 0.0;

    double value(const std::string& lowercase_word) const;
    // entry / total, 0 when the word is unknown or the lexicon is empty
    double relative(const std::string& lowercase_word) const;
};

// `word<TAB>value` per line; duplicate words are summed, words lowercased.
// Error kinds: NegativeValue, MalformedLine.
Lexicon load_lexicon(const std::string& path);

struct ManifestRow {
    std::string id;
    std::string text_path;
    std::optional<std::string> trees_path;
    std::optional<std::string> disc_path;
    std::optional<double> score;
    std::optional<Level> level;
};

// Manifest: one article per row,
//   id<TAB>text_path<TAB>trees_path_or_-<TAB>disc_path_or_-<TAB>score_or_level_or_-
// Relative paths resolve against the manifest's directory.
std::vector<ManifestRow> parse_manifest(const std::string& path);

// Loads and validates one article. When a tree file is present its line
// count must match the text file's sentence count and tokens are read from
// tree leaves; otherwise the text is whitespace-tokenized with leading and
// trailing ASCII punctuation split off as separate tokens.
// Error kinds: FileMissing, SentenceTreeCountMismatch, InvariantViolation,
// plus anything the per-format parsers raise.
Article load_article(const ManifestRow& row);

std::vector<Article> load_manifest(const std::string& path);

// The bare tokenizer used when no trees are supplied (exposed for tests).
std::vector<Token> tokenize_line(const std::string& line);

std::string read_file(const std::string& path);

}  // namespace textcomp
