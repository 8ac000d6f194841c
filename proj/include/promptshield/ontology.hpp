#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace promptshield::ontology {

/// The only placeholder recognized inside prompt templates. It is replaced
/// with the serialized event/context at dispatch time.
inline constexpr std::string_view kEventPlaceholder = "{{event}}";

/// Expert-authored system/user prompt pair registered for one prompt type.
struct TemplatePair {
    std::string system_template;
    std::string user_template;

    bool operator==(const TemplatePair&) const = default;
};

/// Keyword rule deciding whether a user prompt counts as a standard prompt
/// of `prompt_type`. A rule fires when at least `min_matches` of its
/// keywords occur as whole tokens in the normalized user prompt.
struct StandardPromptRule {
    std::string prompt_type;
    std::set<std::string> required_keywords;  // normalized single tokens
    size_t min_matches = 1;

    bool operator==(const StandardPromptRule&) const = default;
};

/// One upstream model the gateway may dispatch to. `endpoint` is either an
/// absolute http(s) URL or the reserved token "simulated".
struct ModelSpec {
    std::string name;
    std::string endpoint;
    bool is_default = false;

    bool operator==(const ModelSpec&) const = default;
};

inline constexpr std::string_view kSimulatedEndpoint = "simulated";

/// Model invocation parameters shared by every dispatch.
struct AttributeSet {
    double temperature = 0.0;  // [0, 2]
    size_t max_output_tokens = 256;
    std::map<std::string, std::string> extra;

    bool operator==(const AttributeSet&) const = default;
};

/// Auxiliary capability registered alongside the prompt classes.
struct FunctionSpec {
    std::string name;
    std::string description;

    bool operator==(const FunctionSpec&) const = default;
};

/// The knowledge base backing the gateway: models, attributes, functions,
/// per-type templates, and the standard-prompt registry. Immutable after
/// load; updates are whole-document replacement.
struct Ontology {
    std::string version;
    std::vector<ModelSpec> models;
    AttributeSet attributes;
    std::vector<FunctionSpec> functions;
    std::map<std::string, TemplatePair> prompt_classes;  // keyed by type id
    std::vector<StandardPromptRule> standard_registry;

    bool operator==(const Ontology&) const = default;

    const ModelSpec& default_model() const;
};

/// Document could not be parsed at all (bad syntax, not an object, ...).
class MalformedDocument : public std::runtime_error {
public:
    explicit MalformedDocument(const std::string& what)
        : std::runtime_error("malformed ontology document: " + what) {}
};

/// Document parsed but violates the schema; `path()` names the offender.
class SchemaViolation : public std::runtime_error {
public:
    SchemaViolation(std::string path, const std::string& what)
        : std::runtime_error("schema violation at " + path + ": " + what),
          path_(std::move(path)) {}

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class UnknownPromptType : public std::runtime_error {
public:
    explicit UnknownPromptType(const std::string& type_id)
        : std::runtime_error("unknown prompt type: " + type_id) {}
};

/// Lint result. All findings are warnings; loading already rejected errors.
struct Finding {
    std::string code;     // e.g. "duplicate-keywords"
    std::string path;     // offending location
    std::string message;  // human-readable detail

    bool operator==(const Finding&) const = default;
};

/// True when `id` is a non-empty lowercase-kebab token ([a-z0-9-]).
bool is_valid_prompt_type_id(std::string_view id);

/// Parses and validates an ontology document (UTF-8 JSON). Pure: the same
/// bytes always yield the same structurally identical ontology.
/// Throws MalformedDocument or SchemaViolation.
Ontology load_ontology(std::string_view document);

/// Canonical byte form: keys sorted lexicographically, 2-space indent,
/// trailing newline. load_ontology(serialize_ontology(o)) == o.
std::string serialize_ontology(const Ontology& o);

/// Returns the template pair registered for `type_id`.
/// Throws UnknownPromptType.
const TemplatePair& lookup_templates(const Ontology& o,
                                     const std::string& type_id);

/// Warns about rules with identical keyword sets, template pairs that never
/// use the event placeholder, and functions nothing references. Never
/// mutates the ontology.
std::vector<Finding> lint_ontology(const Ontology& o);

}  // namespace promptshield::ontology
