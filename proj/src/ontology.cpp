#include "promptshield/ontology.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

#include "promptshield/text.hpp"

namespace promptshield::ontology {

using nlohmann::json;

namespace {

// Parses JSON while tracking object keys so duplicate ids are rejected
// instead of silently collapsing to the last occurrence.
json parse_checked(std::string_view document) {
    std::vector<std::set<std::string>> open_objects;
    std::vector<std::string> container_path;
    std::string last_key;
    std::optional<std::pair<std::string, std::string>> duplicate;

    auto current_path = [&] {
        std::string path = "$";
        for (const auto& label : container_path) {
            if (!label.empty()) {
                path += "." + label;
            }
        }
        return path;
    };

    json::parser_callback_t cb = [&](int /*depth*/, json::parse_event_t event,
                                     json& parsed) {
        switch (event) {
            case json::parse_event_t::object_start:
                open_objects.emplace_back();
                container_path.push_back(std::exchange(last_key, {}));
                break;
            case json::parse_event_t::object_end:
                open_objects.pop_back();
                container_path.pop_back();
                break;
            case json::parse_event_t::array_start:
                container_path.push_back(std::exchange(last_key, {}));
                break;
            case json::parse_event_t::array_end:
                container_path.pop_back();
                break;
            case json::parse_event_t::key: {
                last_key = parsed.get<std::string>();
                if (!open_objects.back().insert(last_key).second && !duplicate) {
                    duplicate = {current_path(), last_key};
                }
                break;
            }
            case json::parse_event_t::value:
                last_key.clear();
                break;
        }
        return true;
    };

    json doc;
    try {
        doc = json::parse(document, cb);
    } catch (const json::parse_error& e) {
        throw MalformedDocument(e.what());
    }
    if (duplicate) {
        throw SchemaViolation(duplicate->first,
                              "duplicate key \"" + duplicate->second + "\"");
    }
    if (!doc.is_object()) {
        throw MalformedDocument("top-level value must be an object");
    }
    return doc;
}

const json& require_field(const json& obj, const char* key,
                          const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw SchemaViolation(path, std::string("missing field \"") + key + "\"");
    }
    return *it;
}

std::string require_string(const json& obj, const char* key,
                           const std::string& path) {
    const json& v = require_field(obj, key, path);
    if (!v.is_string()) {
        throw SchemaViolation(path + "." + key, "expected a string");
    }
    return v.get<std::string>();
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        if (std::none_of(known.begin(), known.end(),
                         [&](const char* k) { return key == k; })) {
            throw SchemaViolation(path, "unexpected key \"" + key + "\"");
        }
    }
}

bool is_absolute_url(std::string_view s) {
    return s.starts_with("http://") || s.starts_with("https://");
}

// A template may contain "{{" only as part of the event placeholder.
void validate_template_text(const std::string& tmpl, const std::string& path) {
    if (tmpl.empty()) {
        throw SchemaViolation(path, "template must be non-empty");
    }
    const std::string stripped =
        text::replace_all(tmpl, kEventPlaceholder, "");
    if (stripped.find("{{") != std::string::npos) {
        throw SchemaViolation(path, "unresolved placeholder token (only " +
                                        std::string(kEventPlaceholder) +
                                        " is supported)");
    }
}

std::vector<ModelSpec> parse_models(const json& doc) {
    const json& arr = require_field(doc, "models", "$");
    if (!arr.is_array() || arr.empty()) {
        throw SchemaViolation("$.models", "expected a non-empty array");
    }
    std::vector<ModelSpec> models;
    size_t default_count = 0;
    for (size_t i = 0; i < arr.size(); ++i) {
        const std::string path = "$.models[" + std::to_string(i) + "]";
        const json& m = arr[i];
        if (!m.is_object()) {
            throw SchemaViolation(path, "expected an object");
        }
        reject_unknown_keys(m, {"name", "endpoint", "default"}, path);
        ModelSpec spec;
        spec.name = require_string(m, "name", path);
        if (spec.name.empty()) {
            throw SchemaViolation(path + ".name", "must be non-empty");
        }
        spec.endpoint = require_string(m, "endpoint", path);
        if (spec.endpoint != kSimulatedEndpoint &&
            !is_absolute_url(spec.endpoint)) {
            throw SchemaViolation(path + ".endpoint",
                                  "expected an absolute URL or \"simulated\"");
        }
        if (const auto it = m.find("default"); it != m.end()) {
            if (!it->is_boolean()) {
                throw SchemaViolation(path + ".default", "expected a boolean");
            }
            spec.is_default = it->get<bool>();
        }
        default_count += spec.is_default ? 1 : 0;
        models.push_back(std::move(spec));
    }
    if (default_count != 1) {
        throw SchemaViolation("$.models",
                              "exactly one model must be marked default");
    }
    return models;
}

AttributeSet parse_attributes(const json& doc) {
    const json& a = require_field(doc, "attributes", "$");
    if (!a.is_object()) {
        throw SchemaViolation("$.attributes", "expected an object");
    }
    reject_unknown_keys(a, {"temperature", "max_output_tokens", "extra"},
                        "$.attributes");
    AttributeSet attrs;
    if (const auto it = a.find("temperature"); it != a.end()) {
        if (!it->is_number()) {
            throw SchemaViolation("$.attributes.temperature",
                                  "expected a number");
        }
        attrs.temperature = it->get<double>();
        if (attrs.temperature < 0.0 || attrs.temperature > 2.0) {
            throw SchemaViolation("$.attributes.temperature",
                                  "must lie in [0, 2]");
        }
    }
    if (const auto it = a.find("max_output_tokens"); it != a.end()) {
        if (!it->is_number_unsigned()) {
            throw SchemaViolation("$.attributes.max_output_tokens",
                                  "expected a non-negative integer");
        }
        attrs.max_output_tokens = it->get<size_t>();
    }
    if (const auto it = a.find("extra"); it != a.end()) {
        if (!it->is_object()) {
            throw SchemaViolation("$.attributes.extra", "expected an object");
        }
        for (const auto& [key, value] : it->items()) {
            if (!value.is_string()) {
                throw SchemaViolation("$.attributes.extra." + key,
                                      "expected a string");
            }
            attrs.extra[key] = value.get<std::string>();
        }
    }
    return attrs;
}

std::vector<FunctionSpec> parse_functions(const json& doc) {
    const json& arr = require_field(doc, "functions", "$");
    if (!arr.is_array()) {
        throw SchemaViolation("$.functions", "expected an array");
    }
    std::vector<FunctionSpec> functions;
    std::set<std::string> names;
    for (size_t i = 0; i < arr.size(); ++i) {
        const std::string path = "$.functions[" + std::to_string(i) + "]";
        const json& f = arr[i];
        if (!f.is_object()) {
            throw SchemaViolation(path, "expected an object");
        }
        reject_unknown_keys(f, {"name", "description"}, path);
        FunctionSpec spec;
        spec.name = require_string(f, "name", path);
        if (spec.name.empty()) {
            throw SchemaViolation(path + ".name", "must be non-empty");
        }
        spec.description = require_string(f, "description", path);
        if (!names.insert(spec.name).second) {
            throw SchemaViolation(path + ".name",
                                  "duplicate function name \"" + spec.name + "\"");
        }
        functions.push_back(std::move(spec));
    }
    return functions;
}

std::map<std::string, TemplatePair> parse_prompt_classes(const json& doc) {
    const json& obj = require_field(doc, "prompt_classes", "$");
    if (!obj.is_object()) {
        throw SchemaViolation("$.prompt_classes", "expected an object");
    }
    std::map<std::string, TemplatePair> classes;
    for (const auto& [type_id, value] : obj.items()) {
        const std::string path = "$.prompt_classes." + type_id;
        if (!is_valid_prompt_type_id(type_id)) {
            throw SchemaViolation(path,
                                  "prompt type ids must be lowercase-kebab tokens");
        }
        if (!value.is_object()) {
            throw SchemaViolation(path, "expected an object");
        }
        reject_unknown_keys(value, {"system_template", "user_template"}, path);
        TemplatePair pair;
        pair.system_template = require_string(value, "system_template", path);
        pair.user_template = require_string(value, "user_template", path);
        validate_template_text(pair.system_template, path + ".system_template");
        validate_template_text(pair.user_template, path + ".user_template");
        classes.emplace(type_id, std::move(pair));
    }
    return classes;
}

std::vector<StandardPromptRule> parse_registry(
    const json& doc, const std::map<std::string, TemplatePair>& classes) {
    const json& arr = require_field(doc, "standard_registry", "$");
    if (!arr.is_array()) {
        throw SchemaViolation("$.standard_registry", "expected an array");
    }
    std::vector<StandardPromptRule> rules;
    for (size_t i = 0; i < arr.size(); ++i) {
        const std::string path = "$.standard_registry[" + std::to_string(i) + "]";
        const json& r = arr[i];
        if (!r.is_object()) {
            throw SchemaViolation(path, "expected an object");
        }
        reject_unknown_keys(r, {"prompt_type", "required_keywords", "min_matches"},
                            path);
        StandardPromptRule rule;
        rule.prompt_type = require_string(r, "prompt_type", path);
        if (!classes.contains(rule.prompt_type)) {
            throw SchemaViolation(path + ".prompt_type",
                                  "references undeclared prompt type \"" +
                                      rule.prompt_type + "\"");
        }
        const json& kws = require_field(r, "required_keywords", path);
        if (!kws.is_array() || kws.empty()) {
            throw SchemaViolation(path + ".required_keywords",
                                  "expected a non-empty array");
        }
        for (const auto& kw : kws) {
            if (!kw.is_string()) {
                throw SchemaViolation(path + ".required_keywords",
                                      "expected strings");
            }
            const std::string normalized = text::normalize(kw.get<std::string>());
            if (normalized.empty() ||
                normalized.find(' ') != std::string::npos) {
                throw SchemaViolation(path + ".required_keywords",
                                      "keyword \"" + kw.get<std::string>() +
                                          "\" does not normalize to a single token");
            }
            rule.required_keywords.insert(normalized);
        }
        if (const auto it = r.find("min_matches"); it != r.end()) {
            if (!it->is_number_unsigned() || it->get<size_t>() == 0) {
                throw SchemaViolation(path + ".min_matches",
                                      "expected a positive integer");
            }
            rule.min_matches = it->get<size_t>();
        } else {
            rule.min_matches = static_cast<size_t>(std::ceil(
                0.75 * static_cast<double>(rule.required_keywords.size())));
        }
        if (rule.min_matches > rule.required_keywords.size()) {
            throw SchemaViolation(
                path + ".min_matches",
                "exceeds the number of distinct required keywords");
        }
        rules.push_back(std::move(rule));
    }
    return rules;
}

}  // namespace

bool is_valid_prompt_type_id(std::string_view id) {
    if (id.empty() || id.front() == '-' || id.back() == '-') {
        return false;
    }
    bool prev_dash = false;
    for (const char c : id) {
        const bool dash = c == '-';
        const bool ok = dash || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
        if (!ok || (dash && prev_dash)) {
            return false;
        }
        prev_dash = dash;
    }
    return true;
}

const ModelSpec& Ontology::default_model() const {
    for (const auto& m : models) {
        if (m.is_default) {
            return m;
        }
    }
    throw std::runtime_error("ontology declares no default model");
}

Ontology load_ontology(std::string_view document) {
    const json doc = parse_checked(document);
    reject_unknown_keys(doc,
                        {"version", "models", "attributes", "functions",
                         "prompt_classes", "standard_registry"},
                        "$");
    Ontology o;
    o.version = require_string(doc, "version", "$");
    o.models = parse_models(doc);
    o.attributes = parse_attributes(doc);
    o.functions = parse_functions(doc);
    o.prompt_classes = parse_prompt_classes(doc);
    o.standard_registry = parse_registry(doc, o.prompt_classes);
    return o;
}

std::string serialize_ontology(const Ontology& o) {
    json doc;
    doc["version"] = o.version;
    json models = json::array();
    for (const auto& m : o.models) {
        models.push_back(
            {{"name", m.name}, {"endpoint", m.endpoint}, {"default", m.is_default}});
    }
    doc["models"] = std::move(models);
    doc["attributes"] = {{"temperature", o.attributes.temperature},
                         {"max_output_tokens", o.attributes.max_output_tokens},
                         {"extra", o.attributes.extra}};
    json functions = json::array();
    for (const auto& f : o.functions) {
        functions.push_back({{"name", f.name}, {"description", f.description}});
    }
    doc["functions"] = std::move(functions);
    json classes = json::object();
    for (const auto& [type_id, pair] : o.prompt_classes) {
        classes[type_id] = {{"system_template", pair.system_template},
                            {"user_template", pair.user_template}};
    }
    doc["prompt_classes"] = std::move(classes);
    json registry = json::array();
    for (const auto& r : o.standard_registry) {
        registry.push_back({{"prompt_type", r.prompt_type},
                            {"required_keywords", r.required_keywords},
                            {"min_matches", r.min_matches}});
    }
    doc["standard_registry"] = std::move(registry);
    return doc.dump(2) + "\n";
}

const TemplatePair& lookup_templates(const Ontology& o,
                                     const std::string& type_id) {
    const auto it = o.prompt_classes.find(type_id);
    if (it == o.prompt_classes.end()) {
        throw UnknownPromptType(type_id);
    }
    return it->second;
}

std::vector<Finding> lint_ontology(const Ontology& o) {
    std::vector<Finding> findings;

    // Rules that declare exactly the same keyword set shadow each other.
    for (size_t i = 0; i < o.standard_registry.size(); ++i) {
        for (size_t j = i + 1; j < o.standard_registry.size(); ++j) {
            const auto& a = o.standard_registry[i];
            const auto& b = o.standard_registry[j];
            if (a.required_keywords == b.required_keywords) {
                findings.push_back(
                    {"duplicate-keywords",
                     "$.standard_registry[" + std::to_string(j) + "]",
                     "identical keyword set as rule " + std::to_string(i) +
                         " (types \"" + a.prompt_type + "\", \"" + b.prompt_type +
                         "\")"});
            }
        }
    }

    // A template pair that never mentions the event placeholder produces
    // context-free prompts; usually an authoring mistake.
    for (const auto& [type_id, pair] : o.prompt_classes) {
        const bool uses_placeholder =
            pair.system_template.find(kEventPlaceholder) != std::string::npos ||
            pair.user_template.find(kEventPlaceholder) != std::string::npos;
        if (!uses_placeholder) {
            findings.push_back({"no-event-placeholder",
                                "$.prompt_classes." + std::string(type_id),
                                "neither template uses " +
                                    std::string(kEventPlaceholder)});
        }
    }

    // Functions are referenced by name from template text; anything else
    // is dead weight in the knowledge base.
    for (size_t i = 0; i < o.functions.size(); ++i) {
        const auto& fn = o.functions[i];
        const bool referenced = std::any_of(
            o.prompt_classes.begin(), o.prompt_classes.end(),
            [&](const auto& entry) {
                return entry.second.system_template.find(fn.name) !=
                           std::string::npos ||
                       entry.second.user_template.find(fn.name) !=
                           std::string::npos;
            });
        if (!referenced) {
            findings.push_back({"unused-function",
                                "$.functions[" + std::to_string(i) + "]",
                                "function \"" + fn.name +
                                    "\" is never referenced by any template"});
        }
    }
    return findings;
}

}  // namespace promptshield::ontology
