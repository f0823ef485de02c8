#include "textcomp/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "textcomp/csv.hpp"
#include "textcomp/error.hpp"
#include "textcomp/rng.hpp"

namespace textcomp {

namespace {

// Absorbs decimal-to-binary rounding: scores like 1.0 and 1.7 must compare
// as exactly 0.7 apart at threshold 0.7.
constexpr double kScoreSlack = 1e-9;

std::vector<std::string> short_name_list() {
    const auto& names = feature_short_names();
    return {names.begin(), names.end()};
}

PairLabel gap_label(double gap, double threshold) {
    return gap <= threshold + kScoreSlack ? PairLabel::Same : PairLabel::Different;
}

// linear index -> (i, j) with i < j, over pairs sorted by (i, j)
std::pair<std::size_t, std::size_t> unrank_pair(std::uint64_t index, std::size_t m) {
    std::size_t i = 0;
    std::uint64_t row = m - 1;
    while (index >= row) {
        index -= row;
        row--;
        i++;
    }
    return {i, i + 1 + static_cast<std::size_t>(index)};
}

}  // namespace

const std::string& pair_label_name(PairLabel label) {
    static const std::string kSame = "same";
    static const std::string kDifferent = "different";
    return label == PairLabel::Same ? kSame : kDifferent;
}

PairDataset build_threshold_pairs(const std::vector<ScoredVector>& scored, double threshold) {
    if (scored.size() < 2) {
        fail("TooFewArticles", "threshold pairing needs at least 2 scored articles");
    }
    if (!(threshold > 0.0)) fail("InvariantViolation", "threshold must be > 0");
    PairDataset ds;
    ds.feature_names = short_name_list();
    ds.provenance = Provenance::Threshold;
    for (std::size_t i = 0; i < scored.size(); ++i) {
        for (std::size_t j = i + 1; j < scored.size(); ++j) {
            PairInstance inst;
            inst.vector = pair_difference(scored[i].vector, scored[j].vector);
            inst.label = gap_label(std::abs(scored[i].score - scored[j].score), threshold);
            ds.instances.push_back(std::move(inst));
        }
    }
    return ds;
}

double balance_threshold(const std::vector<double>& scores) {
    if (scores.size() < 2) {
        fail("TooFewArticles", "threshold search needs at least 2 scored articles");
    }
    std::vector<double> gaps;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        for (std::size_t j = i + 1; j < scores.size(); ++j) {
            gaps.push_back(std::abs(scores[i] - scores[j]));
        }
    }
    std::sort(gaps.begin(), gaps.end());
    std::vector<double> distinct;  // clustered within the slack
    for (double g : gaps) {
        if (distinct.empty() || g - distinct.back() > kScoreSlack) distinct.push_back(g);
    }

    std::vector<double> candidates;
    if (distinct.front() > kScoreSlack) candidates.push_back(distinct.front() / 2.0);
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
        candidates.push_back((distinct[i] + distinct[i + 1]) / 2.0);
    }
    candidates.push_back(distinct.back() + 0.5);

    double best_threshold = candidates.front();
    std::int64_t best_imbalance = -1;
    for (double t : candidates) {
        std::int64_t same = 0;
        for (double g : gaps) {
            if (gap_label(g, t) == PairLabel::Same) same++;
        }
        const std::int64_t imbalance =
            std::abs(same - (static_cast<std::int64_t>(gaps.size()) - same));
        if (best_imbalance < 0 || imbalance < best_imbalance) {
            best_imbalance = imbalance;
            best_threshold = t;  // candidates ascend, so ties keep the smaller
        }
    }
    return best_threshold;
}

PairDataset build_aligned_pairs(const std::vector<AlignedVectors>& aligned,
                                std::size_t pairs_per_class, std::uint64_t seed) {
    const std::size_t m = aligned.size();
    const std::uint64_t same_level_pool = m < 2 ? 0 : static_cast<std::uint64_t>(m) * (m - 1) / 2;
    const std::size_t n_cc = pairs_per_class - pairs_per_class / 2;  // complex gets the odd one
    const std::size_t n_ss = pairs_per_class / 2;
    if (pairs_per_class > m || n_cc > same_level_pool || n_ss > same_level_pool) {
        fail("InsufficientArticles",
             "need " + std::to_string(pairs_per_class) + " pairs per class from " +
                 std::to_string(m) + " aligned article pairs");
    }

    PairDataset ds;
    ds.feature_names = short_name_list();
    ds.provenance = Provenance::Aligned;
    std::mt19937_64 rng(seed);

    auto emit_same_level = [&](std::size_t count, bool complex_side) {
        for (std::uint64_t index : sample_distinct(rng, same_level_pool, count)) {
            auto [i, j] = unrank_pair(index, m);
            PairInstance inst;
            inst.vector = complex_side
                              ? pair_difference(aligned[i].complex_vector, aligned[j].complex_vector)
                              : pair_difference(aligned[i].simple_vector, aligned[j].simple_vector);
            inst.label = PairLabel::Same;
            ds.instances.push_back(std::move(inst));
        }
    };
    if (n_cc > 0) emit_same_level(n_cc, true);
    if (n_ss > 0) emit_same_level(n_ss, false);

    for (std::uint64_t index : sample_distinct(rng, m, pairs_per_class)) {
        const auto& pair = aligned[static_cast<std::size_t>(index)];
        PairInstance inst;
        inst.vector = pair_difference(pair.complex_vector, pair.simple_vector);
        inst.label = PairLabel::Different;
        ds.instances.push_back(std::move(inst));
    }
    return ds;
}

void write_dataset(const PairDataset& ds, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoError", "cannot write " + path);
    std::vector<std::string> header = {"id_a", "id_b", "label"};
    for (const auto& name : feature_short_names()) header.push_back(name);
    out << csv_join(header) << "\n";
    for (const auto& inst : ds.instances) {
        std::vector<std::string> fields = {inst.id_a(), inst.id_b(),
                                           pair_label_name(inst.label)};
        for (double v : inst.vector.deltas) fields.push_back(format_double_exact(v));
        out << csv_join(fields) << "\n";
    }
    if (!out) fail("IoError", "failed while writing " + path);
}

PairDataset read_dataset(const std::string& path) {
    const std::string text = read_file(path);
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
    if (lines.empty()) fail("SchemaMismatch", path + ": empty dataset file");

    std::vector<std::string> expected = {"id_a", "id_b", "label"};
    for (const auto& name : feature_short_names()) expected.push_back(name);
    if (csv_split(lines[0]) != expected) {
        fail("SchemaMismatch", path + ": header must be id_a,id_b,label,f1,...,f16");
    }

    PairDataset ds;
    ds.feature_names = short_name_list();
    std::set<std::pair<std::string, std::string>> seen;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = csv_split(lines[i]);
        if (fields.size() != expected.size()) {
            fail("SchemaMismatch", at_line(path, i + 1) + "expected " +
                                       std::to_string(expected.size()) + " fields");
        }
        PairInstance inst;
        inst.vector.id_a = fields[0];
        inst.vector.id_b = fields[1];
        if (fields[2] == "same") {
            inst.label = PairLabel::Same;
        } else if (fields[2] == "different") {
            inst.label = PairLabel::Different;
        } else {
            fail("SchemaMismatch", at_line(path, i + 1) + "unknown label '" + fields[2] + "'");
        }
        for (int f = 0; f < kFeatureCount; ++f) {
            try {
                inst.vector.deltas[f] = std::stod(fields[3 + f]);
            } catch (const std::exception&) {
                fail("SchemaMismatch", at_line(path, i + 1) + "bad number '" + fields[3 + f] + "'");
            }
        }
        auto key = std::minmax(inst.vector.id_a, inst.vector.id_b);
        if (!seen.insert({key.first, key.second}).second) {
            fail("InvariantViolation",
                 at_line(path, i + 1) + "duplicate pair " + inst.id_a() + "/" + inst.id_b());
        }
        ds.instances.push_back(std::move(inst));
    }
    return ds;
}

}  // namespace textcomp
