#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "textcomp/features.hpp"

namespace textcomp {

enum class PairLabel { Same, Different };

const std::string& pair_label_name(PairLabel label);  // "same" / "different"

struct PairInstance {
    PairVector vector;
    PairLabel label = PairLabel::Same;

    const std::string& id_a() const { return vector.id_a; }
    const std::string& id_b() const { return vector.id_b; }
};

enum class Provenance { Threshold, Aligned };

struct PairDataset {
    std::vector<PairInstance> instances;
    std::vector<std::string> feature_names;       // the 16 short names
    std::optional<Provenance> provenance;         // absent after a CSV round-trip

    std::size_t size() const { return instances.size(); }
};

struct ScoredVector {
    FeatureVector vector;
    double score = 0.0;
};

struct AlignedVectors {
    FeatureVector complex_vector;
    FeatureVector simple_vector;
};

// All C(k,2) unordered pairs in input order; Same iff the score gap is at
// most `threshold` (the comparison absorbs decimal-to-binary rounding, so a
// gap of exactly 0.7 is Same at threshold 0.7). Vector = a - b with a before
// b in the input. Error kind: TooFewArticles.
PairDataset build_threshold_pairs(const std::vector<ScoredVector>& scored, double threshold);

// Among candidate thresholds (midpoints between consecutive distinct
// pairwise gaps, plus one below the smallest positive gap and one above the
// largest), returns the one minimizing |#Same - #Different|; ties go to the
// smaller threshold. Error kind: TooFewArticles.
double balance_threshold(const std::vector<double>& scores);

// pairs_per_class negatives = sampled aligned (complex, simple) pairs;
// pairs_per_class positives = same-level pairs, split between
// complex-complex and simple-simple (complex gets the extra one when odd).
// All sampling is without replacement and seed-deterministic.
// Error kind: InsufficientArticles.
PairDataset build_aligned_pairs(const std::vector<AlignedVectors>& aligned,
                                std::size_t pairs_per_class, std::uint64_t seed);

// CSV with header `id_a,id_b,label,f1,...,f16`; doubles are printed
// round-trip exactly. Error kinds: IoError, SchemaMismatch.
void write_dataset(const PairDataset& ds, const std::string& path);
PairDataset read_dataset(const std::string& path);

}  // namespace textcomp
