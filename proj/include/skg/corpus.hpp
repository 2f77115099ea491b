#pragma once

#include "skg/ontology.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace skg::corpus {

struct ConceptMention {
    std::string surface;
    ConceptLabel label;

    bool operator==(const ConceptMention&) const = default;
};

// One S2ORC-style corpus row.
struct PaperRecord {
    std::string id;
    std::string title;
    std::optional<std::string> abstract;
    std::vector<std::string> authors;
    std::optional<int> year;
    std::optional<std::string> venue;
    std::optional<std::string> journal;
    std::vector<std::string> field_of_study;
    std::vector<std::string> outbound_citations;
    std::optional<std::string> url;
    std::vector<ConceptMention> concepts;

    bool operator==(const PaperRecord&) const = default;
};

struct LineError {
    std::size_t line;  // 1-based
    std::string message;

    bool operator==(const LineError&) const = default;
};

struct ParseResult {
    std::vector<PaperRecord> records;
    std::vector<LineError> errors;
};

// Reads one JSON object per line. Blank lines are skipped. Malformed lines
// and duplicate ids land in `errors`; the first occurrence of an id wins.
ParseResult parse_corpus(std::istream& in);

// Throws std::invalid_argument describing the first problem found.
PaperRecord record_from_json(const nlohmann::json& j);
nlohmann::json record_to_json(const PaperRecord& r);

void write_corpus(std::ostream& out, std::span<const PaperRecord> records);
nlohmann::json errors_to_json(std::span<const LineError> errors);

bool is_valid_paper_id(std::string_view id);

struct AttributeCoverage {
    std::size_t total = 0;
    std::map<std::string, double> per_attribute;  // title, abstract, author, venue/journal
};

// Fraction of records with each key attribute present. An empty corpus
// reports every fraction as 1.0.
AttributeCoverage coverage_stats(std::span<const PaperRecord> records);
nlohmann::json coverage_to_json(const AttributeCoverage& c);

std::vector<PaperRecord> filter_by_field(std::span<const PaperRecord> records,
                                         std::string_view field_value);

struct VenueMatch {
    std::set<std::string> venues;
    std::set<std::string> journals;
};

VenueMatch match_venues(std::span<const PaperRecord> records,
                        std::span<const std::string> keywords);

// Records whose venue or journal is one of the matched names.
std::vector<PaperRecord> filter_by_venues(std::span<const PaperRecord> records,
                                          const VenueMatch& match);

// Folds `extra` into `base` by normalized title. Matched records only fill
// fields that are empty in the existing record; unmatched extras are
// appended with ids prefixed "<source>:".
std::vector<PaperRecord> merge_by_title(std::vector<PaperRecord> base,
                                        std::span<const PaperRecord> extra,
                                        std::string_view source = "extra");

}  // namespace skg::corpus
