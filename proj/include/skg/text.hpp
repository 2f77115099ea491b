#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace skg::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

// Trims and collapses internal whitespace runs to a single space.
std::string collapse_whitespace(std::string_view s);

// Lowercase + collapsed whitespace. Used as the dedup key for names.
std::string normalize_name(std::string_view s);

// Lowercase, ASCII punctuation removed, whitespace collapsed.
std::string normalize_title(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

bool contains_icase(std::string_view haystack, std::string_view needle);
bool equals_icase(std::string_view a, std::string_view b);

// RFC 3986 percent-encoding of everything outside the unreserved set.
std::string url_encode(std::string_view s);
std::string url_decode(std::string_view s);

// Levenshtein distance over bytes. Returns limit + 1 as soon as the
// distance is known to exceed limit.
std::size_t edit_distance(std::string_view a, std::string_view b, std::size_t limit);

}  // namespace skg::text
