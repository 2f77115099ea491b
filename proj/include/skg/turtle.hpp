#pragma once

#include "skg/graph.hpp"

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace skg::turtle {

struct ParseError : std::runtime_error {
    ParseError(std::size_t line, std::size_t column, const std::string& message);
    std::size_t line;
    std::size_t column;
};

inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

// Literal-valued attribute predicates understood by the reader and writer.
inline constexpr std::string_view kAttributeVocabulary[] = {"title", "year", "url", "name", "dbpediaUrl", "sourceId"};

// "<ns>/ontology#"
std::string vocabulary_namespace(std::string_view ns);

// Writes one subject block per entity, sorted by iri; attributes first, then
// relations. Throws GraphError for attributes outside the vocabulary.
void serialize_turtle(const KnowledgeGraph& g, std::ostream& out, std::string_view ns = kDefaultNamespace);
std::string to_turtle(const KnowledgeGraph& g, std::string_view ns = kDefaultNamespace);

// Predicates are matched on their local name (after '#' or the last '/').
// Syntax errors carry line/column; unknown predicates are reported together.
KnowledgeGraph parse_turtle(std::string_view source);
KnowledgeGraph parse_turtle(std::istream& in);
KnowledgeGraph load_turtle_file(const std::string& path);

}  // namespace skg::turtle
