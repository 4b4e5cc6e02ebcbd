#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rvnli::text {

// Lower-cased alphanumeric runs; everything else separates.
std::vector<std::string> tokenize(std::string_view s);

bool is_stopword(std::string_view token);

// Light suffix stripping so that "animals"/"animal" and "melts"/"melt" meet.
std::string stem(std::string_view token);

// Tokens minus stopwords and single letters (variable names), stemmed, in order, duplicates kept.
std::vector<std::string> content_tokens(std::string_view s);

// "ForestFire" -> "forest fire", "IncreaseHeatEnergy" -> "increase heat energy".
std::string split_camel(std::string_view identifier);

std::string trim(std::string_view s);
std::string lower(std::string_view s);
// Collapses internal whitespace and trims; used for exact-text comparisons.
std::string normalize_space(std::string_view s);

std::uint64_t fnv1a(std::string_view s);
std::string hex64(std::uint64_t v);

}  // namespace rvnli::text
