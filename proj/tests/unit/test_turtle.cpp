#include "skg/turtle.hpp"

#include "random_graph.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace skg;
using namespace skg::turtle;

namespace {

std::string read_file(const std::string& name) {
    std::ifstream in(std::string(SKG_FIXTURE_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

KnowledgeGraph single_paper() {
    std::vector<Entity> es{
        {"http://skg.example.org/paper/ldavis", EntityType::Paper,
         {{"title", "LDAvis: A method for \"visualizing\" topics"}, {"year", "2014"}, {"sourceId", "ldavis"}}},
        {"http://skg.example.org/author/carson%20sievert", EntityType::Author, {{"name", "Carson Sievert"}}},
        {"http://skg.example.org/concept/latent%20dirichlet%20allocation", EntityType::Concept,
         {{"name", "Latent Dirichlet allocation"},
          {"dbpediaUrl", "http://dbpedia.org/resource/Latent_Dirichlet_allocation"}}},
    };
    std::vector<Triple> ts{
        {es[0].iri, Predicate::creator, es[1].iri},
        {es[0].iri, Predicate::hasMethod, es[2].iri},
        {es[0].iri, Predicate::hasApplication, es[2].iri},
    };
    return KnowledgeGraph(es, ts);
}

void expect_parse_error(const std::string& doc, std::size_t line, const std::string& fragment) {
    try {
        parse_turtle(doc);
        FAIL() << "expected ParseError for:\n" << doc;
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line, line) << e.what();
        EXPECT_GE(e.column, 1u);
        EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
}

}  // namespace

TEST(Turtle, EmptyGraph) {
    auto doc = to_turtle(KnowledgeGraph{});
    EXPECT_NE(doc.find("@prefix skg: <http://skg.example.org/ontology#>"), std::string::npos);
    EXPECT_TRUE(parse_turtle(doc).empty());
}

TEST(Turtle, SinglePaperGolden) {
    EXPECT_EQ(to_turtle(single_paper()), read_file("single_paper.ttl"));
    EXPECT_EQ(parse_turtle(read_file("single_paper.ttl")), single_paper());
}

TEST(Turtle, RandomRoundTrip) {
    std::mt19937 rng(5);
    for (int i = 0; i < 50; ++i) {
        auto g = fixtures::to_graph(fixtures::random_raw_graph(rng, 20, true));
        EXPECT_EQ(parse_turtle(to_turtle(g)), g) << to_turtle(g);
    }
}

TEST(Turtle, CustomNamespace) {
    auto g = single_paper();
    auto doc = to_turtle(g, "https://kg.test");
    EXPECT_NE(doc.find("<https://kg.test/ontology#>"), std::string::npos);
    EXPECT_EQ(parse_turtle(doc), g);
}

TEST(Turtle, ReaderAcceptsCommonSyntax) {
    auto g = parse_turtle(R"(PREFIX ex: <http://e.org/>
@prefix voc: <http://other.vocab/terms/> .
# comment
ex:p1 a voc:Paper ; voc:title """Multi
line"""@en ; voc:year 2019 ;
  voc:cites ex:p2 , <http://e.org/p3> .
ex:p2 <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> voc:Paper ; voc:title 'Twoé' .
<http://e.org/p3> a voc:Paper ; voc:title "Three"^^<http://www.w3.org/2001/XMLSchema#string> .
)");
    ASSERT_EQ(g.size(), 3u);
    EXPECT_EQ(*g.find("http://e.org/p1")->attribute("title"), "Multi\nline");
    EXPECT_EQ(*g.find("http://e.org/p1")->attribute("year"), "2019");
    EXPECT_EQ(*g.find("http://e.org/p2")->attribute("title"), "Two\xC3\xA9");
    EXPECT_EQ(g.triples().size(), 2u);
}

TEST(Turtle, SyntaxErrorsCarryPosition) {
    expect_parse_error("@prefix skg: <http://skg.example.org/ontology#> .\n<urn:a> a skg:Paper ;\n  skg:title \"x .\n",
                       3, "turtle:3:");
    expect_parse_error("<urn:a> a undefined:Paper .\n", 1, "undefined");
    expect_parse_error("@base <http://x/> .\n", 1, "@base");
    expect_parse_error("@prefix skg: <http://skg.example.org/ontology#> .\n<urn:a> skg:title \"x\" .\n", 2, "type");
}

TEST(Turtle, UnknownPredicatesListed) {
    try {
        parse_turtle(R"(@prefix skg: <http://skg.example.org/ontology#> .
<urn:a> a skg:Paper ; skg:title "A" ;
  skg:reviewedBy <urn:b> ;
  skg:fundedBy <urn:c> .
)");
        FAIL();
    } catch (const ParseError& e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("reviewedBy"), std::string::npos) << msg;
        EXPECT_NE(msg.find("fundedBy"), std::string::npos) << msg;
        EXPECT_EQ(e.line, 3u);
    }
}

TEST(Turtle, OntologyViolationRejected) {
    EXPECT_THROW(parse_turtle(R"(@prefix skg: <http://skg.example.org/ontology#> .
<urn:a> a skg:Author ; skg:name "A" ; skg:cites <urn:b> .
<urn:b> a skg:Paper ; skg:title "B" .
)"),
                 GraphError);
}

TEST(Turtle, SerializerRejectsForeignAttributes) {
    KnowledgeGraph g({{"urn:a", EntityType::Author, {{"name", "A"}, {"email", "a@x"}}}}, {});
    EXPECT_THROW(to_turtle(g), GraphError);
}

TEST(Turtle, CaseStudyFixtureLoads) {
    auto g = load_turtle_file(std::string(SKG_FIXTURE_DIR) + "/case_study.ttl");
    EXPECT_EQ(g.size(), 30u);
    EXPECT_EQ(parse_turtle(to_turtle(g)), g);
    EXPECT_THROW(load_turtle_file("/nonexistent/graph.ttl"), std::exception);
}
