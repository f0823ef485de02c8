#include <doctest.h>

#include <cmath>
#include <functional>

#include "testutil.hpp"
#include "textcomp/discourse_stats.hpp"
#include "textcomp/error.hpp"

using namespace textcomp;
using testutil::relation;

namespace {

std::string error_kind(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return "<no error>";
}

// the worked example article: <explicit, contrast> x2 plus <implicit, cause>
Article worked_article() {
    auto article = testutil::make_article("worked", {"(S (NN stub))"});
    article.relations = {relation(Realization::Explicit, Sense::Contrast, "but"),
                         relation(Realization::Implicit, Sense::Cause),
                         relation(Realization::Explicit, Sense::Contrast, "but")};
    return article;
}

}  // namespace

TEST_CASE("derive_events: bag of discourse properties") {
    const auto article = worked_article();

    auto rs = derive_events(article, EventKind::RealizationSense);
    REQUIRE(rs.size() == 2);
    CHECK(rs.at({EventKind::RealizationSense, {"explicit", "contrast"}}) == 2);
    CHECK(rs.at({EventKind::RealizationSense, {"implicit", "cause"}}) == 1);
    CHECK(total_count(rs) == 3);

    // the markerless implicit relation drops out "where applicable"
    auto sm = derive_events(article, EventKind::SenseMarker);
    REQUIRE(sm.size() == 1);
    CHECK(sm.at({EventKind::SenseMarker, {"contrast", "but"}}) == 2);

    auto rsm = derive_events(article, EventKind::RealizationSenseMarker);
    REQUIRE(rsm.size() == 1);
    CHECK(rsm.at({EventKind::RealizationSenseMarker, {"explicit", "contrast", "but"}}) == 2);

    Article empty = testutil::make_article("empty", {"(S (NN stub))"});
    CHECK(derive_events(empty, EventKind::RealizationSense).empty());

    // implicit relations may carry an inserted marker and then count for F2/F3
    Article implicit_marked = testutil::make_article("im", {"(S (NN stub))"});
    implicit_marked.relations = {relation(Realization::Implicit, Sense::Cause, "because")};
    CHECK(derive_events(implicit_marked, EventKind::SenseMarker).size() == 1);
}

TEST_CASE("fit_model tallies events and article sizes") {
    const auto article = worked_article();
    auto model = fit_model({article}, EventKind::RealizationSense, 1.0);
    CHECK(model.event_counts.size() == 2);
    CHECK(model.event_total == 3);
    CHECK(model.vocab_size == 3);  // 2 observed + unseen bucket
    CHECK(model.n_counts.at(3) == 1);
    CHECK(model.n_total == 1);

    auto doubled = fit_model({article, article}, EventKind::RealizationSense, 1.0);
    CHECK(doubled.event_total == 6);
    CHECK(doubled.n_counts.at(3) == 2);
    CHECK(doubled.n_total == 2);

    CHECK(error_kind([&] { fit_model({}, EventKind::RealizationSense, 1.0); }) == "EmptyCorpus");
    CHECK(error_kind([&] { fit_model({article}, EventKind::RealizationSense, 0.0); }) ==
          "NonPositiveAlpha");
}

TEST_CASE("fit tally is additive over corpus halves") {
    const auto a = worked_article();
    auto b = testutil::make_article("b", {"(S (NN stub))"});
    b.relations = {relation(Realization::Explicit, Sense::Conjunction, "and")};
    auto joint = fit_model({a, b}, EventKind::RealizationSense);
    auto left = fit_model({a}, EventKind::RealizationSense);
    auto right = fit_model({b}, EventKind::RealizationSense);
    CHECK(joint.event_total == left.event_total + right.event_total);
    CHECK(joint.n_total == left.n_total + right.n_total);
}

TEST_CASE("event_prob: hand Laplace arithmetic") {
    auto model = fit_model({worked_article()}, EventKind::RealizationSense, 1.0);
    CHECK(event_prob(model, {EventKind::RealizationSense, {"explicit", "contrast"}}) ==
          doctest::Approx(0.5));  // (2+1)/(3+3)
    CHECK(event_prob(model, {EventKind::RealizationSense, {"implicit", "list"}}) ==
          doctest::Approx(1.0 / 6.0));  // unseen
    for (const char* sense : {"cause", "list", "exception"}) {
        CHECK(event_prob(model, {EventKind::RealizationSense, {"implicit", sense}}) > 0.0);
    }
}

TEST_CASE("n_prob: add-one over the observed support") {
    const auto article = worked_article();
    auto model = fit_model({article, article}, EventKind::RealizationSense, 1.0);
    // n_counts {3:2}, n_total 2, support 1
    CHECK(n_prob(model, 3) == doctest::Approx(0.75));
    CHECK(n_prob(model, 7) == doctest::Approx(0.25));
    for (std::int64_t n : {0, 1, 3, 100}) CHECK(n_prob(model, n) > 0.0);
}

TEST_CASE("log_score: worked toy model equals ln 0.216") {
    const auto model = testutil::toy_model();
    CHECK(n_prob(model, 3) == 0.5);
    CHECK(event_prob(model, testutil::toy_event_a()) == 0.6);
    CHECK(event_prob(model, testutil::toy_event_b()) == 0.4);

    EventCounts events;
    events[testutil::toy_event_a()] = 2;
    events[testutil::toy_event_b()] = 1;
    const double score = log_score(model, events);
    CHECK(score == doctest::Approx(std::log(0.216)).epsilon(1e-12));
    CHECK(score == doctest::Approx(std::log(0.5) + std::log(6.0) + 2 * std::log(0.6) -
                                   std::log(2.0) + std::log(0.4))
                       .epsilon(1e-12));
}

TEST_CASE("log_score degenerate cases") {
    const auto model = testutil::toy_model();
    CHECK(log_score(model, {}) == doctest::Approx(std::log(n_prob(model, 0))).epsilon(1e-12));

    EventCounts one;
    one[testutil::toy_event_a()] = 1;
    CHECK(log_score(model, one) ==
          doctest::Approx(std::log(n_prob(model, 1)) + std::log(0.6)).epsilon(1e-12));
}

TEST_CASE("multinomial_pmf: exact toy value and limits") {
    const auto model = testutil::toy_model();
    EventCounts events;
    events[testutil::toy_event_a()] = 2;
    events[testutil::toy_event_b()] = 1;
    CHECK(multinomial_pmf(model, events) == doctest::Approx(0.216).epsilon(1e-12));
    CHECK(multinomial_pmf(model, {}) == doctest::Approx(n_prob(model, 0)).epsilon(1e-12));

    EventCounts big;
    big[testutil::toy_event_a()] = 21;
    CHECK(error_kind([&] { multinomial_pmf(model, big); }) == "OverflowRisk");
    EventCounts at_limit;
    at_limit[testutil::toy_event_a()] = 20;
    CHECK_NOTHROW(multinomial_pmf(model, at_limit));
}

TEST_CASE("oracle equivalence on randomized models") {
    std::mt19937_64 rng(7);
    const std::vector<std::string> realizations = {"explicit", "implicit"};
    for (int round = 0; round < 100; ++round) {
        ProbabilityModel model;
        model.kind = EventKind::RealizationSense;
        const int vocab = 2 + static_cast<int>(uniform_below(rng, 6));
        for (int v = 0; v < vocab; ++v) {
            Event e{EventKind::RealizationSense,
                    {realizations[v % 2], "s" + std::to_string(v)}};
            model.event_counts[e] = 1 + static_cast<std::int64_t>(uniform_below(rng, 50));
        }
        for (const auto& [e, c] : model.event_counts) model.event_total += c;
        model.vocab_size = vocab + 1;
        const int support = 1 + static_cast<int>(uniform_below(rng, 4));
        for (int s = 0; s < support; ++s) {
            model.n_counts[static_cast<std::int64_t>(uniform_below(rng, 25))] +=
                1 + static_cast<std::int64_t>(uniform_below(rng, 5));
        }
        for (const auto& [n, c] : model.n_counts) model.n_total += c;
        model.alpha = testutil::uniform(rng, 0.05, 2.0);

        EventCounts events;
        std::int64_t budget = static_cast<std::int64_t>(uniform_below(rng, 21));
        while (budget > 0) {
            const std::int64_t take = 1 + static_cast<std::int64_t>(uniform_below(rng, budget));
            Event e{EventKind::RealizationSense,
                    {realizations[uniform_below(rng, 2)],
                     "s" + std::to_string(uniform_below(rng, vocab + 2))}};  // may be unseen
            events[e] += take;
            budget -= take;
        }
        const double pmf = multinomial_pmf(model, events);
        const double via_log = std::exp(log_score(model, events));
        REQUIRE(pmf > 0.0);
        CHECK(std::abs(via_log - pmf) / pmf < 1e-9);
    }
}

TEST_CASE("log_factorial: cumulative table") {
    CHECK(log_factorial(0) == 0.0);
    CHECK(log_factorial(1) == 0.0);
    for (std::int64_t n = 1; n <= 40; ++n) {
        CHECK(log_factorial(n) ==
              doctest::Approx(log_factorial(n - 1) + std::log(static_cast<double>(n)))
                  .epsilon(1e-12));
    }
    CHECK(log_factorial(20) == doctest::Approx(std::lgamma(21.0)).epsilon(1e-12));
}

TEST_CASE("model JSON round trip keeps scores bit-identical") {
    const auto articles = load_manifest((testutil::data_dir() / "mini" / "manifest.tsv").string());
    for (EventKind kind : {EventKind::RealizationSense, EventKind::SenseMarker,
                           EventKind::RealizationSenseMarker}) {
        const auto model = fit_model(articles, kind, 0.7);
        const std::string dumped = model_to_json(model);
        const auto reloaded = model_from_json(dumped);
        CHECK(model_to_json(reloaded) == dumped);  // byte-stable
        for (const auto& article : articles) {
            const auto events = derive_events(article, kind);
            CHECK(log_score(model, events) == log_score(reloaded, events));
        }
    }
}

TEST_CASE("model JSON rejects inconsistent documents") {
    CHECK(error_kind([] { model_from_json("{broken"); }) == "SchemaMismatch");
    CHECK(error_kind([] { model_from_json("{}"); }) == "SchemaMismatch");
    CHECK(error_kind([] {
              model_from_json(R"({"kind":"realization_sense","alpha":1.0,"event_total":5,
                                  "n_total":1,"event_counts":[["explicit","contrast",2]],
                                  "n_counts":[[2,1]]})");
          }) == "SchemaMismatch");  // event_total 5 != tallied 2
}
