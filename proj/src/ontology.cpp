#include "skg/ontology.hpp"

#include "skg/text.hpp"

namespace skg {

std::string_view to_string(EntityType t) {
    switch (t) {
    case EntityType::Paper: return "Paper";
    case EntityType::Concept: return "Concept";
    case EntityType::Author: return "Author";
    case EntityType::Journal: return "Journal";
    case EntityType::Conference: return "Conference";
    }
    return "?";
}

std::string_view to_string(Predicate p) {
    switch (p) {
    case Predicate::cites: return "cites";
    case Predicate::creator: return "creator";
    case Predicate::appearsInJournal: return "appearsInJournal";
    case Predicate::appearsInConference: return "appearsInConference";
    case Predicate::hasData: return "hasData";
    case Predicate::hasApplication: return "hasApplication";
    case Predicate::hasMethod: return "hasMethod";
    case Predicate::hasVisualization: return "hasVisualization";
    case Predicate::hasEvaluation: return "hasEvaluation";
    }
    return "?";
}

std::string_view to_string(ConceptLabel l) {
    switch (l) {
    case ConceptLabel::application: return "application";
    case ConceptLabel::data: return "data";
    case ConceptLabel::method: return "method";
    case ConceptLabel::visualization: return "visualization";
    case ConceptLabel::evaluation: return "evaluation";
    }
    return "?";
}

std::optional<EntityType> parse_entity_type(std::string_view s) {
    for (auto t : kEntityTypes)
        if (text::equals_icase(s, to_string(t)))
            return t;
    return std::nullopt;
}

std::optional<Predicate> parse_predicate(std::string_view s) {
    for (auto p : kPredicates)
        if (s == to_string(p))
            return p;
    return std::nullopt;
}

std::optional<ConceptLabel> parse_concept_label(std::string_view s) {
    for (auto l : kConceptLabels)
        if (text::equals_icase(s, to_string(l)))
            return l;
    return std::nullopt;
}

EntityType entity_type_from(std::string_view s) {
    if (auto t = parse_entity_type(s))
        return *t;
    throw OntologyError("unknown entity type '" + std::string(s) + "'");
}

ConceptLabel concept_label_from(std::string_view s) {
    if (auto l = parse_concept_label(s))
        return *l;
    throw OntologyError("unknown concept label '" + std::string(s) + "'");
}

Signature signature(Predicate p) {
    switch (p) {
    case Predicate::cites: return {EntityType::Paper, EntityType::Paper};
    case Predicate::creator: return {EntityType::Paper, EntityType::Author};
    case Predicate::appearsInJournal: return {EntityType::Paper, EntityType::Journal};
    case Predicate::appearsInConference: return {EntityType::Paper, EntityType::Conference};
    default: return {EntityType::Paper, EntityType::Concept};
    }
}

Predicate role_predicate(ConceptLabel l) {
    switch (l) {
    case ConceptLabel::application: return Predicate::hasApplication;
    case ConceptLabel::data: return Predicate::hasData;
    case ConceptLabel::method: return Predicate::hasMethod;
    case ConceptLabel::visualization: return Predicate::hasVisualization;
    case ConceptLabel::evaluation: return Predicate::hasEvaluation;
    }
    throw OntologyError("bad concept label");
}

std::optional<ConceptLabel> predicate_role(Predicate p) {
    switch (p) {
    case Predicate::hasApplication: return ConceptLabel::application;
    case Predicate::hasData: return ConceptLabel::data;
    case Predicate::hasMethod: return ConceptLabel::method;
    case Predicate::hasVisualization: return ConceptLabel::visualization;
    case Predicate::hasEvaluation: return ConceptLabel::evaluation;
    default: return std::nullopt;
    }
}

std::string_view name_attribute(EntityType t) {
    return t == EntityType::Paper ? "title" : "name";
}

}  // namespace skg
