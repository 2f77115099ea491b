#pragma once

#include "skg/graph.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace skg::query {

struct QueryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Type-level ontology graph

// Undirected type adjacency induced by predicate domain/range.
std::set<std::pair<EntityType, EntityType>> ontology_edges();

// Hop distance between two entity types. For a == b this is the shortest
// closed walk through the type: 1 for Paper (cites), 2 for every other type.
int ontology_distance(EntityType a, EntityType b);

// ---------------------------------------------------------------------------
// Entity retrieval

struct FuzzyMatch {
    std::string iri;
    int tier;  // 0 exact, 1 substring, 2 edit distance
    std::size_t quality;  // extra characters (tier 1) or edit distance (tier 2)
};

// Case-insensitive match of any term against the entity name/title:
// exact matches first, then substring, then names within edit distance
// floor(0.2 * term length). Ties by iri.
std::vector<FuzzyMatch> fuzzy_matches(const KnowledgeGraph& g, std::span<const std::string> terms,
                                      EntityType type);

std::vector<std::string> fuzzy_query(const KnowledgeGraph& g, std::span<const std::string> terms,
                                     EntityType type, std::size_t limit, std::size_t offset = 0);

// Splits comma-separated user input into trimmed non-empty terms.
std::vector<std::string> split_terms(std::string_view input);

// ---------------------------------------------------------------------------
// Traversal

std::set<std::string> reachable(const KnowledgeGraph& g, std::string_view iri, int cutoff);

// Number of simple undirected paths of length 1..cutoff between a and b.
std::size_t path_score(const KnowledgeGraph& g, std::string_view a, std::string_view b, int cutoff);

// One DFS from `source`: for every entity reachable within `cutoff` hops,
// the number of simple paths ending there.
std::map<KnowledgeGraph::Index, std::size_t> count_simple_paths(const KnowledgeGraph& g,
                                                                KnowledgeGraph::Index source, int cutoff);

struct QuerySpec {
    std::vector<std::string> sources;
    EntityType target_type = EntityType::Paper;
    std::size_t k = 10;
};

struct ScoredEntity {
    std::string iri;
    std::size_t score = 0;

    bool operator==(const ScoredEntity&) const = default;
};

using Edge = std::pair<std::string, std::string>;

struct QueryResult {
    std::vector<std::string> sources;
    std::vector<ScoredEntity> targets;  // score desc, iri asc
    std::vector<Edge> cross_edges;      // (source, target), sorted, unique
    std::optional<std::vector<Edge>> internal_edges;

    bool operator==(const QueryResult&) const = default;
};

// Multi-source expansion: candidates of the target type reachable from each
// source within the ontology distance, scored by simple-path count summed
// over sources; top-k kept along with their source edges.
QueryResult semantic_query(const KnowledgeGraph& g, const QuerySpec& spec);

// Relations among the given entities: citations between papers (citing,
// cited); for other types, unordered pairs (a < b) sharing at least one paper.
std::vector<Edge> internal_edges(const KnowledgeGraph& g, std::span<const std::string> targets);

// ---------------------------------------------------------------------------
// Graph views

struct Subgraph {
    std::vector<std::string> nodes;  // sorted, unique
    std::vector<Edge> edges;         // sorted, unique
    std::vector<std::string> highlighted;

    bool operator==(const Subgraph&) const = default;
};

Subgraph normalized(Subgraph s);
Subgraph cross_graph(const QueryResult& r);
Subgraph internal_graph(const KnowledgeGraph& g, const QueryResult& r);

struct ComparisonResult {
    Subgraph merged;              // merged.highlighted == common
    std::vector<std::string> common;
};

ComparisonResult compare_graphs(std::span<const Subgraph> graphs);
ComparisonResult compare_graphs(std::span<const QueryResult> results);

struct CooccurrenceLink {
    std::string concept_a;
    std::string concept_b;
    std::size_t weight = 0;

    bool operator==(const CooccurrenceLink&) const = default;
};

// For each unordered concept pair, the number of papers linked to both.
// Zero-weight pairs are omitted; concept_a < concept_b.
std::vector<CooccurrenceLink> cooccurrence_links(const KnowledgeGraph& g, std::span<const std::string> concepts);

nlohmann::json to_json(const QueryResult& r);
nlohmann::json to_json(const Subgraph& s);

}  // namespace skg::query
