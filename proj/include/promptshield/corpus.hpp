#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "promptshield/label.hpp"

namespace promptshield::corpus {

/// One CloudTrail-style management event.
struct CloudEvent {
    std::string event_name;
    std::optional<std::string> error_code;
    std::optional<std::string> error_message;  // only with error_code
    std::string source_ip;
    std::string user_identity_type;
    std::string event_time;  // ISO-8601
    std::map<std::string, std::string> extra;

    bool operator==(const CloudEvent&) const = default;
};

struct LabeledEvent {
    CloudEvent event;
    Label label = Label::Legit;

    bool operator==(const LabeledEvent&) const = default;
};

/// Bucket ratios driving the synthetic generator. Ratios must sum to 1.
struct MixRatios {
    double no_error_benign = 0.55;
    double invalid_input = 0.10;
    double unauthorized = 0.20;
    double other_error = 0.10;
    double anomaly = 0.05;
    /// Share of invalid-input events generated with an anomalous event name
    /// (and therefore labeled Malicious despite the benign-looking error).
    double invalid_input_malicious = 0.02;

    bool operator==(const MixRatios&) const = default;
};

struct Corpus {
    std::vector<LabeledEvent> events;
    uint64_t seed = 0;
    MixRatios generator_params;

    bool operator==(const Corpus&) const = default;
};

class InvalidMix : public std::runtime_error {
public:
    explicit InvalidMix(const std::string& what)
        : std::runtime_error("invalid mix: " + what) {}
};

class MalformedRecord : public std::runtime_error {
public:
    MalformedRecord(size_t line, const std::string& what)
        : std::runtime_error("malformed record at line " + std::to_string(line) +
                             ": " + what),
          line_(line) {}

    size_t line() const { return line_; }

private:
    size_t line_;
};

/// Error codes treated as unauthorized access.
bool is_unauthorized_code(std::string_view error_code);
/// Error codes naming an invalid-input condition.
bool is_invalid_input_code(std::string_view error_code);
/// Event names that are suspicious even without an error (defense evasion).
bool is_anomalous_event_name(std::string_view event_name);

/// Ground-truth labeling rule. Total and deterministic:
///  - unauthorized error codes are Malicious;
///  - invalid-input error codes are Legit unless the event name is on the
///    anomaly list;
///  - any other error (exception types included) is Malicious;
///  - error-free events are Legit unless the event name is on the anomaly
///    list.
Label label_event(const CloudEvent& e);

/// Deterministic synthetic corpus: (seed, n, mix) fully determine the result.
/// All events are distinct and labeled via label_event. Throws InvalidMix.
Corpus generate_corpus(uint64_t seed, size_t n, const MixRatios& mix = {});

/// Drops extra-map columns that carry no information: keys constant (or
/// empty) across the corpus, and for key pairs whose values correspond
/// bijectively, the lexicographically larger key. Core fields are never
/// touched, so labels and error-category predicates are unaffected.
Corpus prune_features(const Corpus& c);

/// JSON-Lines codec. write_corpus(read_corpus(p)) preserves the event list;
/// seed and mix are generation metadata and are not persisted.
std::string write_corpus_string(const Corpus& c);
Corpus read_corpus_string(const std::string& content);
void write_corpus(const Corpus& c, const std::string& path);
Corpus read_corpus(const std::string& path);

/// Single-line JSON form of an event (without its label) used to splice the
/// event into a prompt.
std::string event_to_prompt_json(const CloudEvent& e);
/// Parses an event previously rendered by event_to_prompt_json. Returns
/// nullopt when the text is not such a record.
std::optional<CloudEvent> event_from_prompt_json(const std::string& line);

}  // namespace promptshield::corpus
