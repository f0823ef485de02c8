#include "textcomp/discourse_stats.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <fstream>
#include <mutex>

#include <nlohmann/json.hpp>

#include "textcomp/error.hpp"

namespace textcomp {

namespace {

using json = nlohmann::ordered_json;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

constexpr std::int64_t kPmfMaxEvents = 20;

}  // namespace

const std::string& event_kind_name(EventKind kind) {
    static const std::array<std::string, 3> names = {
        "realization_sense", "sense_marker", "realization_sense_marker"};
    return names[static_cast<int>(kind)];
}

std::optional<EventKind> parse_event_kind(const std::string& name) {
    for (int i = 0; i < 3; ++i) {
        if (name == event_kind_name(static_cast<EventKind>(i))) return static_cast<EventKind>(i);
    }
    return std::nullopt;
}

int event_arity(EventKind kind) { return kind == EventKind::RealizationSenseMarker ? 3 : 2; }

EventCounts derive_events(const Article& article, EventKind kind) {
    EventCounts events;
    for (const auto& rel : article.relations) {
        if (kind != EventKind::RealizationSense && !rel.marker) continue;  // "where applicable"
        Event event;
        event.kind = kind;
        switch (kind) {
            case EventKind::RealizationSense:
                event.parts = {realization_name(rel.realization), sense_name(rel.sense)};
                break;
            case EventKind::SenseMarker:
                event.parts = {sense_name(rel.sense), *rel.marker};
                break;
            case EventKind::RealizationSenseMarker:
                event.parts = {realization_name(rel.realization), sense_name(rel.sense),
                               *rel.marker};
                break;
        }
        events[event]++;
    }
    return events;
}

ProbabilityModel fit_model(const std::vector<Article>& articles, EventKind kind, double alpha) {
    if (articles.empty()) fail("EmptyCorpus", "cannot fit a model on zero articles");
    if (!(alpha > 0.0)) fail("NonPositiveAlpha", "smoothing constant must be > 0");
    ProbabilityModel model;
    model.kind = kind;
    model.alpha = alpha;
    for (const auto& article : articles) {
        const EventCounts events = derive_events(article, kind);
        std::int64_t n = 0;
        for (const auto& [event, count] : events) {
            model.event_counts[event] += count;
            n += count;
        }
        model.event_total += n;
        model.n_counts[n]++;
        model.n_total++;
    }
    model.vocab_size = static_cast<std::int64_t>(model.event_counts.size()) + 1;
    return model;
}

double event_prob(const ProbabilityModel& model, const Event& event) {
    auto it = model.event_counts.find(event);
    const double count = it == model.event_counts.end() ? 0.0 : static_cast<double>(it->second);
    return (count + model.alpha) /
           (static_cast<double>(model.event_total) + model.alpha * static_cast<double>(model.vocab_size));
}

double n_prob(const ProbabilityModel& model, std::int64_t n) {
    auto it = model.n_counts.find(n);
    const double count = it == model.n_counts.end() ? 0.0 : static_cast<double>(it->second);
    const double support = static_cast<double>(model.n_counts.size());
    return (count + 1.0) / (static_cast<double>(model.n_total) + support + 1.0);
}

namespace {

// Grow-only table of cumulative ln k; entry[n] = ln n!.
class LogFactorialTable {
public:
    double value(std::int64_t n) {
        std::lock_guard<std::mutex> lock(mutex_);
        while (static_cast<std::int64_t>(table_.size()) <= n) {
            table_.push_back(table_.back() + std::log(static_cast<double>(table_.size())));
        }
        return table_[static_cast<std::size_t>(n)];
    }

private:
    std::mutex mutex_;
    std::vector<double> table_ = {0.0};  // ln 0! = 0
};

LogFactorialTable& log_factorial_table() {
    static LogFactorialTable table;
    return table;
}

}  // namespace

double log_factorial(std::int64_t n) {
    if (n < 0) fail("InvariantViolation", "log_factorial of a negative count");
    return log_factorial_table().value(n);
}

double log_score(const ProbabilityModel& model, const EventCounts& events) {
    std::int64_t n = 0;
    for (const auto& [event, count] : events) n += count;
    double score = std::log(n_prob(model, n)) + log_factorial(n);
    for (const auto& [event, count] : events) {
        score += static_cast<double>(count) * std::log(event_prob(model, event));
        score -= log_factorial(count);
    }
    return score;
}

namespace {

cpp_int factorial(std::int64_t n) {
    cpp_int out = 1;
    for (std::int64_t k = 2; k <= n; ++k) out *= k;
    return out;
}

// Doubles are dyadic rationals, so this conversion is exact.
cpp_rational rational_from_double(double x) { return cpp_rational(x); }

}  // namespace

double multinomial_pmf(const ProbabilityModel& model, const EventCounts& events) {
    std::int64_t n = 0;
    for (const auto& [event, count] : events) n += count;
    if (n > kPmfMaxEvents) {
        fail("OverflowRisk", "exact pmf limited to " + std::to_string(kPmfMaxEvents) +
                                 " events, got " + std::to_string(n));
    }
    const cpp_rational alpha = rational_from_double(model.alpha);

    // P(n) with add-one smoothing, exactly as n_prob
    auto it = model.n_counts.find(n);
    const std::int64_t n_count = it == model.n_counts.end() ? 0 : it->second;
    cpp_rational pmf(n_count + 1,
                     model.n_total + static_cast<std::int64_t>(model.n_counts.size()) + 1);

    cpp_rational coefficient(factorial(n), 1);
    const cpp_rational denominator =
        cpp_rational(model.event_total) + alpha * cpp_rational(model.vocab_size);
    for (const auto& [event, count] : events) {
        coefficient /= cpp_rational(factorial(count), 1);
        auto found = model.event_counts.find(event);
        const std::int64_t observed = found == model.event_counts.end() ? 0 : found->second;
        const cpp_rational p = (cpp_rational(observed) + alpha) / denominator;
        for (std::int64_t k = 0; k < count; ++k) pmf *= p;
    }
    pmf *= coefficient;
    return pmf.convert_to<double>();
}

// ---------------------------------------------------------------------------
// serialization

std::string model_to_json(const ProbabilityModel& model) {
    json doc;
    doc["kind"] = event_kind_name(model.kind);
    doc["alpha"] = model.alpha;
    doc["event_total"] = model.event_total;
    doc["n_total"] = model.n_total;
    json events = json::array();
    for (const auto& [event, count] : model.event_counts) {  // map order -> stable bytes
        json row = json::array();
        for (const auto& part : event.parts) row.push_back(part);
        row.push_back(count);
        events.push_back(std::move(row));
    }
    doc["event_counts"] = std::move(events);
    json ns = json::array();
    for (const auto& [n, count] : model.n_counts) ns.push_back(json::array({n, count}));
    doc["n_counts"] = std::move(ns);
    return doc.dump(2) + "\n";
}

ProbabilityModel model_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        fail("SchemaMismatch", std::string("model JSON: ") + e.what());
    }
    try {
        ProbabilityModel model;
        auto kind = parse_event_kind(doc.at("kind").get<std::string>());
        if (!kind) fail("SchemaMismatch", "unknown event kind in model JSON");
        model.kind = *kind;
        model.alpha = doc.at("alpha").get<double>();
        if (!(model.alpha > 0.0)) fail("NonPositiveAlpha", "model JSON carries alpha <= 0");
        model.event_total = doc.at("event_total").get<std::int64_t>();
        model.n_total = doc.at("n_total").get<std::int64_t>();
        const int arity = event_arity(model.kind);
        for (const auto& row : doc.at("event_counts")) {
            if (static_cast<int>(row.size()) != arity + 1) {
                fail("SchemaMismatch", "event row arity does not match kind");
            }
            Event event;
            event.kind = model.kind;
            for (int i = 0; i < arity; ++i) event.parts.push_back(row[i].get<std::string>());
            model.event_counts[event] = row[arity].get<std::int64_t>();
        }
        for (const auto& row : doc.at("n_counts")) {
            model.n_counts[row.at(0).get<std::int64_t>()] = row.at(1).get<std::int64_t>();
        }
        model.vocab_size = static_cast<std::int64_t>(model.event_counts.size()) + 1;
        std::int64_t check = 0;
        for (const auto& [event, count] : model.event_counts) check += count;
        if (check != model.event_total) {
            fail("SchemaMismatch", "event_total does not match the event counts");
        }
        return model;
    } catch (const json::exception& e) {
        fail("SchemaMismatch", std::string("model JSON: ") + e.what());
    }
}

void save_model(const ProbabilityModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail("IoError", "cannot write " + path);
    out << model_to_json(model);
}

ProbabilityModel load_model(const std::string& path) {
    return model_from_json(read_file(path));
}

}  // namespace textcomp
