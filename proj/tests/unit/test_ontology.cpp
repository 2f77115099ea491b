#include "skg/ontology.hpp"

#include <gtest/gtest.h>

using namespace skg;

TEST(Ontology, Signatures) {
    EXPECT_TRUE(conforms(EntityType::Paper, Predicate::cites, EntityType::Paper));
    EXPECT_TRUE(conforms(EntityType::Paper, Predicate::creator, EntityType::Author));
    EXPECT_TRUE(conforms(EntityType::Paper, Predicate::appearsInJournal, EntityType::Journal));
    EXPECT_TRUE(conforms(EntityType::Paper, Predicate::appearsInConference, EntityType::Conference));
    for (auto l : kConceptLabels)
        EXPECT_TRUE(conforms(EntityType::Paper, role_predicate(l), EntityType::Concept));
    EXPECT_FALSE(conforms(EntityType::Author, Predicate::creator, EntityType::Paper));
}

TEST(Ontology, RoleMapping) {
    EXPECT_EQ(role_predicate(ConceptLabel::application), Predicate::hasApplication);
    EXPECT_EQ(role_predicate(ConceptLabel::data), Predicate::hasData);
    EXPECT_EQ(role_predicate(ConceptLabel::method), Predicate::hasMethod);
    EXPECT_EQ(role_predicate(ConceptLabel::visualization), Predicate::hasVisualization);
    EXPECT_EQ(role_predicate(ConceptLabel::evaluation), Predicate::hasEvaluation);
    for (auto l : kConceptLabels)
        EXPECT_EQ(predicate_role(role_predicate(l)), l);
    EXPECT_FALSE(predicate_role(Predicate::cites));
}

TEST(Ontology, Parsing) {
    EXPECT_EQ(entity_type_from("concept"), EntityType::Concept);
    EXPECT_EQ(parse_predicate("hasMethod"), Predicate::hasMethod);
    EXPECT_FALSE(parse_entity_type("Venue"));
    EXPECT_THROW(concept_label_from("theory"), OntologyError);
    for (auto t : kEntityTypes)
        EXPECT_EQ(parse_entity_type(to_string(t)), t);
    for (auto p : kPredicates)
        EXPECT_EQ(parse_predicate(to_string(p)), p);
}

TEST(Ontology, NameAttribute) {
    EXPECT_EQ(name_attribute(EntityType::Paper), "title");
    EXPECT_EQ(name_attribute(EntityType::Author), "name");
}
