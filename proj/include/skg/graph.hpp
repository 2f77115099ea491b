#pragma once

#include "skg/corpus.hpp"
#include "skg/ontology.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace skg {

class EntityLinkingClient;

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Entity {
    std::string iri;
    EntityType type = EntityType::Paper;
    std::map<std::string, std::string> attributes;

    // Title for papers, name for everything else; empty when missing.
    const std::string& display_name() const;
    const std::string* attribute(std::string_view key) const;

    bool operator==(const Entity&) const = default;
};

struct Triple {
    std::string s;
    Predicate p = Predicate::cites;
    std::string o;

    bool operator==(const Triple&) const = default;
    auto operator<=>(const Triple&) const = default;
};

struct GraphStats {
    std::map<EntityType, std::size_t> entity_counts;
    std::map<Predicate, std::size_t> relation_counts;

    bool operator==(const GraphStats&) const = default;
};

nlohmann::json stats_to_json(const GraphStats& s);

// Immutable scholarly knowledge graph. Construction validates every
// invariant (unique iris, required attributes, triple endpoints present and
// conforming to the ontology) and builds the traversal indexes; duplicate
// triples collapse.
class KnowledgeGraph {
public:
    using Index = std::uint32_t;

    struct Arc {
        Predicate predicate;
        Index other;
        bool outgoing;  // true when this entity is the triple subject
    };

    KnowledgeGraph() = default;
    KnowledgeGraph(std::vector<Entity> entities, std::vector<Triple> triples);

    // Sorted by iri.
    const std::vector<Entity>& entities() const { return entities_; }
    // Sorted, unique.
    const std::vector<Triple>& triples() const { return triples_; }

    std::size_t size() const { return entities_.size(); }
    bool empty() const { return entities_.empty(); }

    std::optional<Index> index_of(std::string_view iri) const;
    const Entity& entity(Index i) const { return entities_[i]; }
    const Entity* find(std::string_view iri) const;

    // Undirected neighbours with parallel triples collapsed and self-loops
    // removed; sorted ascending.
    std::span<const Index> neighbors(Index i) const { return neighbors_[i]; }

    // Every triple incident to the entity.
    std::span<const Arc> arcs(Index i) const { return arcs_[i]; }

    std::vector<Index> entities_of_type(EntityType t) const;

    GraphStats stats() const;

    bool operator==(const KnowledgeGraph& o) const {
        return entities_ == o.entities_ && triples_ == o.triples_;
    }

private:
    std::vector<Entity> entities_;
    std::vector<Triple> triples_;
    std::unordered_map<std::string, Index> by_iri_;
    std::vector<std::vector<Index>> neighbors_;
    std::vector<std::vector<Arc>> arcs_;
};

GraphStats graph_stats(const KnowledgeGraph& g);

// ---------------------------------------------------------------------------
// Construction from corpus records

inline constexpr std::string_view kDefaultNamespace = "http://skg.example.org";

// <ns>/<etype-lowercase>/<urlencoded-key>
std::string make_iri(std::string_view ns, EntityType type, std::string_view key);

struct NormalizedConcept {
    std::string canonical_name;
    std::optional<std::string> dbpedia_url;
    std::optional<std::string> warning;  // set when the linker failed
};

inline constexpr double kDefaultLinkConfidence = 0.5;

// Links the surface through `linker` (may be null). Falls back to the
// lowercased, whitespace-collapsed surface when nothing reaches `threshold`
// or the linker fails.
NormalizedConcept normalize_concept(std::string_view surface, EntityLinkingClient* linker,
                                    double threshold = kDefaultLinkConfidence);

struct BuildOptions {
    std::string ns = std::string(kDefaultNamespace);
    EntityLinkingClient* linker = nullptr;
    double link_threshold = kDefaultLinkConfidence;
    std::size_t linker_parallelism = 4;
};

struct DroppedCitation {
    std::string paper_id;
    std::string target_id;
    std::string reason;
};

struct BuildReport {
    std::vector<DroppedCitation> dropped_citations;
    std::vector<std::string> warnings;
};

struct BuildResult {
    KnowledgeGraph graph;
    BuildReport report;
};

BuildResult build_graph(std::span<const corpus::PaperRecord> records, const BuildOptions& options = {});

nlohmann::json entity_to_json(const Entity& e);

}  // namespace skg
