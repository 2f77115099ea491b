#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

// The five entity types, nine entity-to-entity predicates and five concept
// roles of the scholarly knowledge graph.

namespace skg {

enum class EntityType { Paper, Concept, Author, Journal, Conference };

enum class Predicate {
    cites,
    creator,
    appearsInJournal,
    appearsInConference,
    hasData,
    hasApplication,
    hasMethod,
    hasVisualization,
    hasEvaluation,
};

enum class ConceptLabel { application, data, method, visualization, evaluation };

inline constexpr std::array kEntityTypes = {EntityType::Paper, EntityType::Concept,
                                            EntityType::Author, EntityType::Journal,
                                            EntityType::Conference};

inline constexpr std::array kPredicates = {
    Predicate::cites,           Predicate::creator,        Predicate::appearsInJournal,
    Predicate::appearsInConference, Predicate::hasData,    Predicate::hasApplication,
    Predicate::hasMethod,       Predicate::hasVisualization, Predicate::hasEvaluation,
};

inline constexpr std::array kConceptLabels = {ConceptLabel::application, ConceptLabel::data,
                                              ConceptLabel::method, ConceptLabel::visualization,
                                              ConceptLabel::evaluation};

struct OntologyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string_view to_string(EntityType t);
std::string_view to_string(Predicate p);
std::string_view to_string(ConceptLabel l);

std::optional<EntityType> parse_entity_type(std::string_view s);
std::optional<Predicate> parse_predicate(std::string_view s);
std::optional<ConceptLabel> parse_concept_label(std::string_view s);

// Case-insensitive lookup; throws OntologyError naming the bad value.
EntityType entity_type_from(std::string_view s);
ConceptLabel concept_label_from(std::string_view s);

struct Signature {
    EntityType domain;
    EntityType range;
};

Signature signature(Predicate p);

inline bool conforms(EntityType s, Predicate p, EntityType o) {
    auto sig = signature(p);
    return sig.domain == s && sig.range == o;
}

Predicate role_predicate(ConceptLabel l);
std::optional<ConceptLabel> predicate_role(Predicate p);

// The key attribute carrying an entity's display name ("title" for papers,
// "name" otherwise).
std::string_view name_attribute(EntityType t);

}  // namespace skg
