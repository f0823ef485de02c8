#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "testutil.hpp"
#include "textcomp/datasets.hpp"
#include "textcomp/error.hpp"

using namespace textcomp;

namespace {

std::string error_kind(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return "<no error>";
}

FeatureVector vec(const std::string& id, double fill) {
    FeatureVector fv;
    fv.article_id = id;
    fv.values.fill(fill);
    return fv;
}

std::vector<ScoredVector> scored_set(const std::vector<double>& scores) {
    std::vector<ScoredVector> out;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out.push_back({vec("s" + std::to_string(i), static_cast<double>(i)), scores[i]});
    }
    return out;
}

std::size_t count_same(const PairDataset& ds) {
    std::size_t n = 0;
    for (const auto& inst : ds.instances) {
        if (inst.label == PairLabel::Same) n++;
    }
    return n;
}

// smallest reachable |#Same - #Different| over every threshold > 0
std::int64_t brute_force_best_imbalance(const std::vector<double>& scores) {
    std::vector<double> gaps;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        for (std::size_t j = i + 1; j < scores.size(); ++j) {
            gaps.push_back(std::abs(scores[i] - scores[j]));
        }
    }
    std::vector<double> probes = gaps;  // inclusive at each gap value
    if (*std::min_element(gaps.begin(), gaps.end()) > 1e-9) {
        probes.push_back(*std::min_element(gaps.begin(), gaps.end()) / 2.0);
    }
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (double t : probes) {
        std::int64_t same = 0;
        for (double g : gaps) {
            if (g <= t + 1e-9) same++;
        }
        best = std::min(best, std::abs(2 * same - static_cast<std::int64_t>(gaps.size())));
    }
    return best;
}

}  // namespace

TEST_CASE("threshold pairing: boundary gap is Same") {
    auto ds = build_threshold_pairs(scored_set({1.0, 1.7}), 0.7);
    REQUIRE(ds.size() == 1);
    CHECK(ds.instances[0].label == PairLabel::Same);  // |1.7-1.0| == 0.7 inclusive

    auto far = build_threshold_pairs(scored_set({1.0, 2.0}), 0.7);
    CHECK(far.instances[0].label == PairLabel::Different);
}

TEST_CASE("threshold pairing: all unordered pairs, manifest orientation") {
    const auto scored = scored_set({1.0, 2.0, 3.0, 4.5});
    auto ds = build_threshold_pairs(scored, 0.7);
    CHECK(ds.size() == 6);
    CHECK(ds.provenance == Provenance::Threshold);
    std::set<std::pair<std::string, std::string>> pairs;
    for (const auto& inst : ds.instances) {
        pairs.insert({inst.id_a(), inst.id_b()});
        CHECK(inst.vector.deltas[0] ==
              doctest::Approx(static_cast<double>(inst.id_a()[1] - inst.id_b()[1])));
    }
    CHECK(pairs.size() == 6);

    for (std::size_t k : {5u, 13u, 28u}) {
        std::vector<double> scores;
        for (std::size_t i = 0; i < k; ++i) scores.push_back(1.0 + 3.0 * i / k);
        CHECK(build_threshold_pairs(scored_set(scores), 0.7).size() == k * (k - 1) / 2);
    }
    CHECK(build_threshold_pairs(scored_set(std::vector<double>(28, 2.0)), 0.7).size() == 378);

    CHECK(error_kind([&] { build_threshold_pairs(scored_set({1.0}), 0.7); }) == "TooFewArticles");
}

TEST_CASE("threshold pairing: swapping input order negates vectors, keeps labels") {
    auto fwd = build_threshold_pairs(scored_set({1.0, 3.0}), 0.7);
    auto scored = scored_set({1.0, 3.0});
    std::swap(scored[0], scored[1]);
    auto rev = build_threshold_pairs(scored, 0.7);
    CHECK(fwd.instances[0].label == rev.instances[0].label);
    for (int f = 0; f < kFeatureCount; ++f) {
        CHECK(fwd.instances[0].vector.deltas[f] == -rev.instances[0].vector.deltas[f]);
    }
}

TEST_CASE("balance_threshold worked cases") {
    CHECK(balance_threshold({1.0, 2.0, 3.0}) == doctest::Approx(1.5));  // 2 same / 1 diff
    CHECK(balance_threshold({2.0, 2.0, 2.0}) == doctest::Approx(0.5));  // degenerate: all same
    CHECK(balance_threshold({1.0, 1.5, 3.0}) == doctest::Approx(1.0));  // 1 same / 2 diff
    CHECK(error_kind([] { balance_threshold({1.0}); }) == "TooFewArticles");
}

TEST_CASE("balance_threshold minimizes imbalance (brute force)") {
    std::mt19937_64 rng(3);
    for (int round = 0; round < 200; ++round) {
        std::vector<double> scores;
        const std::size_t n = 2 + uniform_below(rng, 7);
        for (std::size_t i = 0; i < n; ++i) {
            scores.push_back(1.0 + 0.1 * static_cast<double>(uniform_below(rng, 41)));
        }
        const double threshold = balance_threshold(scores);
        CHECK(threshold > 0.0);
        auto ds = build_threshold_pairs(scored_set(scores), threshold);
        const std::int64_t same = static_cast<std::int64_t>(count_same(ds));
        const std::int64_t imbalance = std::abs(2 * same - static_cast<std::int64_t>(ds.size()));
        CHECK(imbalance == brute_force_best_imbalance(scores));
    }
}

TEST_CASE("aligned pairing: balanced, seeded, without replacement") {
    std::vector<AlignedVectors> aligned;
    for (int i = 0; i < 4; ++i) {
        aligned.push_back({vec("c" + std::to_string(i), i), vec("s" + std::to_string(i), -i)});
    }
    auto ds = build_aligned_pairs(aligned, 2, 7);
    CHECK(ds.size() == 4);
    CHECK(count_same(ds) == 2);
    CHECK(ds.provenance == Provenance::Aligned);

    auto rerun = build_aligned_pairs(aligned, 2, 7);
    REQUIRE(rerun.size() == ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(rerun.instances[i].id_a() == ds.instances[i].id_a());
        CHECK(rerun.instances[i].id_b() == ds.instances[i].id_b());
        CHECK(rerun.instances[i].label == ds.instances[i].label);
    }
    auto other_seed = build_aligned_pairs(aligned, 2, 8);
    bool any_differs = false;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (other_seed.instances[i].id_a() != ds.instances[i].id_a()) any_differs = true;
    }
    CHECK(any_differs);

    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& inst : build_aligned_pairs(aligned, 3, 9).instances) {
        auto key = std::minmax(inst.id_a(), inst.id_b());
        CHECK(seen.insert({key.first, key.second}).second);
    }

    CHECK(error_kind([&] { build_aligned_pairs(aligned, 5, 7); }) == "InsufficientArticles");
}

TEST_CASE("aligned pairing: paper-scale instance count") {
    std::vector<AlignedVectors> aligned;
    for (int i = 0; i < 994; ++i) {
        aligned.push_back({vec("c" + std::to_string(i), i), vec("s" + std::to_string(i), -i)});
    }
    auto ds = build_aligned_pairs(aligned, 994, 1);
    CHECK(ds.size() == 1988);
    CHECK(count_same(ds) == 994);
}

TEST_CASE("aligned pairing: odd class size favors complex pairs") {
    std::vector<AlignedVectors> aligned;
    for (int i = 0; i < 6; ++i) {
        aligned.push_back({vec("c" + std::to_string(i), i), vec("s" + std::to_string(i), -i)});
    }
    auto ds = build_aligned_pairs(aligned, 3, 5);
    std::size_t cc = 0;
    std::size_t ss = 0;
    for (const auto& inst : ds.instances) {
        if (inst.label != PairLabel::Same) continue;
        (inst.id_a()[0] == 'c' ? cc : ss)++;
    }
    CHECK(cc == 2);
    CHECK(ss == 1);
}

TEST_CASE("dataset CSV round trip") {
    const auto dir = testutil::temp_dir("dataset_csv");
    const auto path = (dir / "pairs.csv").string();

    std::mt19937_64 rng(17);
    auto ds = testutil::planted_dataset(40, 2, 0.1, 99);
    write_dataset(ds, path);
    const auto back = read_dataset(path);
    REQUIRE(back.size() == ds.size());
    CHECK_FALSE(back.provenance.has_value());
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(back.instances[i].label == ds.instances[i].label);
        CHECK(back.instances[i].id_a() == ds.instances[i].id_a());
        for (int f = 0; f < kFeatureCount; ++f) {
            CHECK(back.instances[i].vector.deltas[f] == ds.instances[i].vector.deltas[f]);
        }
    }

    PairDataset empty;
    empty.feature_names = ds.feature_names;
    write_dataset(empty, path);
    CHECK(read_dataset(path).size() == 0);
    CHECK(read_file(path) ==
          "id_a,id_b,label,f1,f2,f3,f4,f5,f6,f7,f8,f9,f10,f11,f12,f13,f14,f15,f16\n");
}

TEST_CASE("dataset CSV schema errors") {
    const auto dir = testutil::temp_dir("dataset_schema");
    const auto path = (dir / "pairs.csv").string();

    testutil::write_text(path, "id_a,id_b,f1\n");
    CHECK(error_kind([&] { read_dataset(path); }) == "SchemaMismatch");

    testutil::write_text(path,
                         "id_a,id_b,label,f1,f2,f3,f4,f5,f6,f7,f8,f9,f10,f11,f12,f13,f14,f15,f16\n"
                         "a,b,sideways,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n");
    CHECK(error_kind([&] { read_dataset(path); }) == "SchemaMismatch");

    testutil::write_text(path,
                         "id_a,id_b,label,f1,f2,f3,f4,f5,f6,f7,f8,f9,f10,f11,f12,f13,f14,f15,f16\n"
                         "a,b,same,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n"
                         "b,a,different,1,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0\n");
    CHECK(error_kind([&] { read_dataset(path); }) == "InvariantViolation");  // duplicate pair
}
