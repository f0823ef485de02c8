#include "textcomp/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "textcomp/error.hpp"

namespace textcomp {

namespace {

std::string ascii_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// lowercase with spaces/underscores/hyphens dropped, for tolerant enum lookup
std::string normalize_token(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == ' ' || c == '_' || c == '-') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

bool is_ascii_punct(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return u < 0x80 && std::ispunct(u);
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

bool is_blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(),
                       [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

std::optional<double> parse_double(const std::string& s) {
    double value = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("FileMissing", path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// ---------------------------------------------------------------------------
// parse trees

std::size_t ParseTree::leaf_count() const {
    if (is_leaf()) return 1;
    std::size_t n = 0;
    for (const auto& c : children) n += c->leaf_count();
    return n;
}

void ParseTree::collect_tokens(std::vector<Token>& out) const {
    if (is_leaf()) {
        out.push_back(*token);
        return;
    }
    for (const auto& c : children) c->collect_tokens(out);
}

int ParseTree::height() const {
    if (is_leaf()) return 1;  // the edge down to the word
    int deepest = 0;
    for (const auto& c : children) deepest = std::max(deepest, c->height());
    return deepest + 1;
}

std::string ParseTree::to_string() const {
    std::string out = "(" + label + " ";
    if (is_leaf()) {
        out += token->surface;
    } else {
        for (std::size_t i = 0; i < children.size(); ++i) {
            if (i > 0) out += ' ';
            out += children[i]->to_string();
        }
    }
    out += ')';
    return out;
}

std::unique_ptr<ParseTree> ParseTree::clone() const {
    auto copy = std::make_unique<ParseTree>();
    copy->label = label;
    copy->token = token;
    copy->children.reserve(children.size());
    for (const auto& c : children) copy->children.push_back(c->clone());
    return copy;
}

bool tree_equal(const ParseTree& a, const ParseTree& b) {
    if (a.label != b.label || a.is_leaf() != b.is_leaf()) return false;
    if (a.is_leaf()) return a.token->surface == b.token->surface;
    if (a.children.size() != b.children.size()) return false;
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!tree_equal(*a.children[i], *b.children[i])) return false;
    }
    return true;
}

namespace {

class TreeParser {
public:
    explicit TreeParser(const std::string& text) : text_(text) {}

    std::unique_ptr<ParseTree> run() {
        skip_ws();
        if (eof() || peek() != '(') error("MalformedTree", "expected '('");
        auto root = parse_node();
        skip_ws();
        if (!eof()) error("TrailingInput", "content after the closing bracket");
        return root;
    }

private:
    std::unique_ptr<ParseTree> parse_node() {
        pos_++;  // consume '('
        skip_ws();
        std::string label = read_word();
        if (label.empty()) error("EmptyConstituent", "constituent without a label");
        auto node = std::make_unique<ParseTree>();
        node->label = std::move(label);
        skip_ws();
        if (eof()) error("UnbalancedBrackets", "unclosed constituent");
        if (peek() == ')') error("EmptyConstituent", "constituent '" + node->label + "' has no content");
        if (peek() == '(') {
            while (true) {
                node->children.push_back(parse_node());
                skip_ws();
                if (eof()) error("UnbalancedBrackets", "unclosed constituent");
                if (peek() == ')') break;
                if (peek() != '(') error("MalformedTree", "word mixed into constituent children");
            }
        } else {
            std::string word = read_word();
            node->token = Token{word, node->label};
            skip_ws();
            if (eof()) error("UnbalancedBrackets", "unclosed constituent");
            if (peek() != ')') error("MalformedTree", "more than one word under a preterminal");
        }
        pos_++;  // consume ')'
        return node;
    }

    std::string read_word() {
        std::size_t start = pos_;
        while (!eof() && peek() != '(' && peek() != ')' &&
               !std::isspace(static_cast<unsigned char>(peek()))) {
            pos_++;
        }
        return text_.substr(start, pos_ - start);
    }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) pos_++;
    }

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    [[noreturn]] void error(const char* kind, const std::string& detail) {
        fail(kind, detail + " at offset " + std::to_string(pos_));
    }

    const std::string& text_;
    std::size_t pos_ = 0;
};

}  // namespace

std::unique_ptr<ParseTree> parse_bracketed_tree(const std::string& text) {
    return TreeParser(text).run();
}

Sentence::Sentence(const Sentence& other)
    : tokens(other.tokens), tree(other.tree ? other.tree->clone() : nullptr) {}

Sentence& Sentence::operator=(const Sentence& other) {
    if (this != &other) {
        tokens = other.tokens;
        tree = other.tree ? other.tree->clone() : nullptr;
    }
    return *this;
}

// ---------------------------------------------------------------------------
// senses and discourse files

namespace {

const std::array<std::string, kSenseCount> kSenseNames = {
    "asynchronous",       "synchronous",        "cause",       "pragmatic_cause",
    "condition",          "pragmatic_condition", "contrast",    "pragmatic_contrast",
    "concession",         "pragmatic_concession", "conjunction", "instantiation",
    "restatement",        "alternative",        "exception",   "list",
};

}  // namespace

const std::string& sense_name(Sense s) { return kSenseNames[static_cast<int>(s)]; }

const std::string& realization_name(Realization r) {
    static const std::string kExplicit = "explicit";
    static const std::string kImplicit = "implicit";
    return r == Realization::Explicit ? kExplicit : kImplicit;
}

std::optional<Sense> parse_sense(const std::string& token) {
    const std::string norm = normalize_token(token);
    for (int i = 0; i < kSenseCount; ++i) {
        if (norm == normalize_token(kSenseNames[i])) return static_cast<Sense>(i);
    }
    return std::nullopt;
}

std::optional<Realization> parse_realization(const std::string& token) {
    const std::string norm = normalize_token(token);
    if (norm == "explicit") return Realization::Explicit;
    if (norm == "implicit") return Realization::Implicit;
    return std::nullopt;
}

std::vector<DiscourseRelation> parse_discourse_file(const std::string& text,
                                                    const std::string& path) {
    std::vector<DiscourseRelation> relations;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        const std::size_t lineno = i + 1;
        if (is_blank(line) || line[0] == '#') continue;

        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t bar = line.find('|', start);
            if (bar == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, bar - start));
            start = bar + 1;
        }
        if (fields.size() != 3) {
            fail("MalformedLine", at_line(path, lineno) + "expected Realization|Sense|marker");
        }
        auto realization = parse_realization(fields[0]);
        if (!realization) {
            fail("UnknownRealization", at_line(path, lineno) + "'" + fields[0] + "'");
        }
        auto sense = parse_sense(fields[1]);
        if (!sense) fail("UnknownSense", at_line(path, lineno) + "'" + fields[1] + "'");
        std::optional<std::string> marker;
        if (fields[2] != "-") {
            if (fields[2].empty()) {
                fail("MalformedLine", at_line(path, lineno) + "empty marker field (use '-')");
            }
            marker = ascii_lower(fields[2]);
        }
        if (*realization == Realization::Explicit && !marker) {
            fail("ExplicitWithoutMarker", at_line(path, lineno) + "explicit relation needs a marker");
        }
        relations.push_back({*realization, *sense, std::move(marker)});
    }
    return relations;
}

// ---------------------------------------------------------------------------
// lexicons

double Lexicon::value(const std::string& lowercase_word) const {
    auto it = entries.find(lowercase_word);
    return it == entries.end() ? 0.0 : it->second;
}

double Lexicon::relative(const std::string& lowercase_word) const {
    return total > 0.0 ? value(lowercase_word) / total : 0.0;
}

Lexicon load_lexicon(const std::string& path) {
    const auto lines = split_lines(read_file(path));
    Lexicon lex;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        const std::size_t lineno = i + 1;
        if (is_blank(line) || line[0] == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
            fail("MalformedLine", at_line(path, lineno) + "expected word<TAB>value");
        }
        std::string word = ascii_lower(line.substr(0, tab));
        auto value = parse_double(line.substr(tab + 1));
        if (word.empty() || !value || !std::isfinite(*value)) {
            fail("MalformedLine", at_line(path, lineno) + "expected word<TAB>value");
        }
        if (*value < 0.0) {
            fail("NegativeValue", at_line(path, lineno) + "lexicon values must be >= 0");
        }
        lex.entries[word] += *value;
    }
    lex.total = 0.0;
    for (const auto& [word, value] : lex.entries) lex.total += value;
    return lex;
}

// ---------------------------------------------------------------------------
// tokenization

std::vector<Token> tokenize_line(const std::string& line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) i++;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) i++;
        if (i == start) continue;
        const std::string chunk = line.substr(start, i - start);

        std::size_t lo = 0;
        std::size_t hi = chunk.size();
        while (lo < hi && is_ascii_punct(chunk[lo])) lo++;
        if (lo == hi) {
            tokens.push_back({chunk, std::nullopt});  // all punctuation, keep whole
            continue;
        }
        while (hi > lo && is_ascii_punct(chunk[hi - 1])) hi--;
        for (std::size_t p = 0; p < lo; ++p) tokens.push_back({std::string(1, chunk[p]), std::nullopt});
        tokens.push_back({chunk.substr(lo, hi - lo), std::nullopt});
        for (std::size_t p = hi; p < chunk.size(); ++p) {
            tokens.push_back({std::string(1, chunk[p]), std::nullopt});
        }
    }
    return tokens;
}

// ---------------------------------------------------------------------------
// manifests and articles

namespace {

std::optional<Level> parse_level(const std::string& s) {
    const std::string norm = ascii_lower(s);
    if (norm == "simple") return Level::Simple;
    if (norm == "complex") return Level::Complex;
    return std::nullopt;
}

std::string resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_absolute()) return path.string();
    return (base / path).string();
}

}  // namespace

std::vector<ManifestRow> parse_manifest(const std::string& path) {
    const auto base = std::filesystem::path(path).parent_path();
    const auto lines = split_lines(read_file(path));
    std::vector<ManifestRow> rows;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        const std::size_t lineno = i + 1;
        if (is_blank(line) || line[0] == '#') continue;

        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (fields.size() != 5) {
            fail("MalformedLine",
                 at_line(path, lineno) + "expected id, text, trees, discourse, score/level");
        }
        ManifestRow row;
        row.id = fields[0];
        if (row.id.empty() || fields[1].empty()) {
            fail("MalformedLine", at_line(path, lineno) + "empty id or text path");
        }
        row.text_path = resolve(base, fields[1]);
        if (fields[2] != "-") row.trees_path = resolve(base, fields[2]);
        if (fields[3] != "-") row.disc_path = resolve(base, fields[3]);
        if (fields[4] != "-") {
            if (auto level = parse_level(fields[4])) {
                row.level = level;
            } else if (auto score = parse_double(fields[4])) {
                if (*score < 1.0 || *score > 5.0) {
                    fail("InvariantViolation",
                         at_line(path, lineno) + "score must lie in [1.0, 5.0]");
                }
                row.score = score;
            } else {
                fail("MalformedLine",
                     at_line(path, lineno) + "'" + fields[4] + "' is neither score nor level");
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Article load_article(const ManifestRow& row) {
    Article article;
    article.id = row.id;
    article.score = row.score;
    article.level = row.level;

    std::vector<std::string> text_lines;
    for (const auto& line : split_lines(read_file(row.text_path))) {
        if (!is_blank(line)) text_lines.push_back(line);
    }

    if (row.trees_path) {
        std::vector<std::string> tree_lines;
        for (const auto& line : split_lines(read_file(*row.trees_path))) {
            if (!is_blank(line)) tree_lines.push_back(line);
        }
        if (tree_lines.size() != text_lines.size()) {
            fail("SentenceTreeCountMismatch",
                 row.id + ": " + std::to_string(text_lines.size()) + " sentences vs " +
                     std::to_string(tree_lines.size()) + " trees in " + *row.trees_path);
        }
        for (std::size_t i = 0; i < tree_lines.size(); ++i) {
            std::unique_ptr<ParseTree> tree;
            try {
                tree = parse_bracketed_tree(tree_lines[i]);
            } catch (const Error& e) {
                fail(e.kind(), at_line(*row.trees_path, i + 1) + e.what());
            }
            std::vector<Token> tokens;
            tree->collect_tokens(tokens);
            article.sentences.emplace_back(std::move(tokens), std::move(tree));
        }
    } else {
        for (const auto& line : text_lines) {
            auto tokens = tokenize_line(line);
            if (tokens.empty()) continue;
            article.sentences.emplace_back(std::move(tokens), nullptr);
        }
    }

    if (article.sentences.empty()) {
        fail("InvariantViolation", row.id + ": article has no sentences (" + row.text_path + ")");
    }
    for (const auto& s : article.sentences) {
        if (s.tree && s.tree->leaf_count() != s.tokens.size()) {
            fail("InvariantViolation", row.id + ": tree leaves out of step with tokens");
        }
    }

    if (row.disc_path) {
        article.relations = parse_discourse_file(read_file(*row.disc_path), *row.disc_path);
    }
    return article;
}

std::vector<Article> load_manifest(const std::string& path) {
    std::vector<Article> articles;
    std::set<std::string> seen;
    for (const auto& row : parse_manifest(path)) {
        if (!seen.insert(row.id).second) {
            fail("InvariantViolation", "duplicate article id '" + row.id + "' in " + path);
        }
        articles.push_back(load_article(row));
    }
    return articles;
}

}  // namespace textcomp
