#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "textcomp/corpus.hpp"

namespace textcomp {

enum class EventKind { RealizationSense, SenseMarker, RealizationSenseMarker };

const std::string& event_kind_name(EventKind kind);
std::optional<EventKind> parse_event_kind(const std::string& name);
int event_arity(EventKind kind);

// One observed discourse property, e.g. ("explicit", "contrast") for
// EventKind::RealizationSense. Parts are lowercase and in kind order.
struct Event {
    EventKind kind;
    std::vector<std::string> parts;

    auto operator<=>(const Event&) const = default;
};

using EventCounts = std::map<Event, std::int64_t>;  // multiset as event -> multiplicity

// Bag-of-discourse-properties view of an article. SenseMarker and
// RealizationSenseMarker only see relations that carry a marker.
EventCounts derive_events(const Article& article, EventKind kind);

inline std::int64_t total_count(const EventCounts& events) {
    std::int64_t n = 0;
    for (const auto& [e, c] : events) n += c;
    return n;
}

// Smoothed multinomial model over events of one kind, plus the length
// distribution P(n) over articles' event counts.
struct ProbabilityModel {
    EventKind kind = EventKind::RealizationSense;
    EventCounts event_counts;
    std::int64_t event_total = 0;
    std::int64_t vocab_size = 0;  // distinct observed events + 1 unseen bucket
    std::map<std::int64_t, std::int64_t> n_counts;
    std::int64_t n_total = 0;  // number of training articles
    double alpha = 1.0;
};

// Tallies events and article lengths over the corpus.
// Error kinds: EmptyCorpus, NonPositiveAlpha.
ProbabilityModel fit_model(const std::vector<Article>& articles, EventKind kind,
                           double alpha = 1.0);

// Add-alpha probability (count + alpha) / (event_total + alpha * vocab_size).
// Strictly positive, also for unseen events.
double event_prob(const ProbabilityModel& model, const Event& event);

// Add-one probability of an article having n events:
// (n_counts[n] + 1) / (n_total + support_size + 1), support_size being the
// number of distinct observed n values. Strictly positive.
double n_prob(const ProbabilityModel& model, std::int64_t n);

// ln P(n) + ln n! + sum_i (x_i ln p_i - ln x_i!), natural logarithm.
double log_score(const ProbabilityModel& model, const EventCounts& events);

// Exact-rational evaluation of P(n) * n!/(prod x_i!) * prod p_i^x_i, the
// verification oracle for log_score. Error kind: OverflowRisk when n > 20.
double multinomial_pmf(const ProbabilityModel& model, const EventCounts& events);

// ln n!, served from a lazily extended cumulative table (exposed for tests).
double log_factorial(std::int64_t n);

// JSON (de)serialization; a reloaded model reproduces bit-identical scores
// and dumps are byte-stable across runs.
std::string model_to_json(const ProbabilityModel& model);
ProbabilityModel model_from_json(const std::string& json_text);
void save_model(const ProbabilityModel& model, const std::string& path);
ProbabilityModel load_model(const std::string& path);

}  // namespace textcomp
