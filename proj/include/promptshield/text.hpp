#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace promptshield::text {

/// Canonical text form used by every matching rule in the gateway:
/// UTF-8 aware lowercasing, composition of combining marks onto their
/// Latin base letter where a precomposed form exists (stray marks are
/// dropped), punctuation stripped at token boundaries, and whitespace
/// collapsed to single spaces. Interior punctuation ("don't") survives.
std::string normalize(std::string_view input);

/// Splits an already-normalized string into its space-separated tokens.
std::vector<std::string> tokenize(std::string_view normalized);

/// normalize() followed by tokenize().
std::vector<std::string> normalized_tokens(std::string_view input);

/// Whole-token containment test against normalized input.
bool contains_token(std::string_view normalized, std::string_view token);

/// Replaces every occurrence of `needle` in `haystack` with `replacement`.
std::string replace_all(std::string haystack, std::string_view needle,
                        std::string_view replacement);

}  // namespace promptshield::text
