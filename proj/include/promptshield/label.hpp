#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace promptshield {

/// Binary classification target for cloud events.
enum class Label { Malicious, Legit };

inline constexpr std::string_view to_string(Label l) {
    return l == Label::Malicious ? "Malicious" : "Legit";
}

inline std::optional<Label> label_from_string(std::string_view s) {
    if (s == "Malicious") {
        return Label::Malicious;
    }
    if (s == "Legit") {
        return Label::Legit;
    }
    return std::nullopt;
}

}  // namespace promptshield
