#include "skg/corpus.hpp"
#include "skg/graph.hpp"
#include "skg/linker.hpp"
#include "skg/text.hpp"

#include "random_graph.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <set>

using namespace skg;

namespace {

std::vector<corpus::PaperRecord> load(const std::string& name) {
    std::ifstream in(std::string(SKG_FIXTURE_DIR) + "/" + name);
    return corpus::parse_corpus(in).records;
}

corpus::PaperRecord rec(std::string id, std::string title) {
    corpus::PaperRecord r;
    r.id = std::move(id);
    r.title = std::move(title);
    return r;
}

void expect_conformant(const KnowledgeGraph& g) {
    for (const auto& t : g.triples()) {
        auto* s = g.find(t.s);
        auto* o = g.find(t.o);
        ASSERT_TRUE(s && o);
        EXPECT_TRUE(conforms(s->type, t.p, o->type)) << t.s << " " << to_string(t.p) << " " << t.o;
    }
    std::size_t entities = 0, triples = 0;
    auto st = graph_stats(g);
    for (auto [t, n] : st.entity_counts)
        entities += n;
    for (auto [p, n] : st.relation_counts)
        triples += n;
    EXPECT_EQ(entities, g.size());
    EXPECT_EQ(triples, g.triples().size());
}

LinkedResource res(std::string uri, double sim = 0.9) {
    return {std::move(uri), "", sim};
}

}  // namespace

TEST(BuildGraph, Empty) {
    auto r = build_graph({});
    EXPECT_TRUE(r.graph.empty());
    auto st = graph_stats(r.graph);
    for (auto t : kEntityTypes)
        EXPECT_EQ(st.entity_counts.at(t), 0u);
    for (auto p : kPredicates)
        EXPECT_EQ(st.relation_counts.at(p), 0u);
}

TEST(BuildGraph, LdavisRecord) {
    auto records = load("ldavis.jsonl");
    ASSERT_EQ(records.size(), 1u);
    auto g = build_graph(records).graph;
    auto st = g.stats();
    EXPECT_EQ(st.entity_counts.at(EntityType::Paper), 1u);
    EXPECT_EQ(st.entity_counts.at(EntityType::Author), 2u);
    EXPECT_EQ(st.entity_counts.at(EntityType::Conference), 1u);
    EXPECT_EQ(st.entity_counts.at(EntityType::Concept), 4u);
    EXPECT_EQ(st.relation_counts.at(Predicate::creator), 2u);
    EXPECT_EQ(st.relation_counts.at(Predicate::appearsInConference), 1u);
    EXPECT_EQ(st.relation_counts.at(Predicate::hasMethod), 2u);
    EXPECT_EQ(st.relation_counts.at(Predicate::hasApplication), 1u);
    EXPECT_EQ(st.relation_counts.at(Predicate::hasData), 1u);
    EXPECT_EQ(g.triples().size(), 7u);

    const std::string paper = "http://skg.example.org/paper/ldavis";
    std::set<Triple> expected{
        {paper, Predicate::creator, "http://skg.example.org/author/carson%20sievert"},
        {paper, Predicate::creator, "http://skg.example.org/author/kenneth%20shirley"},
        {paper, Predicate::hasMethod, "http://skg.example.org/concept/latent%20dirichlet%20allocation"},
        {paper, Predicate::hasMethod, "http://skg.example.org/concept/interactive%20visualization"},
        {paper, Predicate::hasApplication, "http://skg.example.org/concept/topic%20interpretation"},
        {paper, Predicate::hasData, "http://skg.example.org/concept/topic-term%20relationship"},
    };
    for (const auto& t : expected)
        EXPECT_TRUE(std::binary_search(g.triples().begin(), g.triples().end(), t)) << t.o;
    EXPECT_EQ(g.find(paper)->attribute("title") ? *g.find(paper)->attribute("title") : "",
              "LDAvis: A method for visualizing and interpreting topics");
    EXPECT_EQ(*g.find(paper)->attribute("year"), "2014");
    EXPECT_EQ(*g.find("http://skg.example.org/author/carson%20sievert")->attribute("name"), "Carson Sievert");
    expect_conformant(g);
}

TEST(BuildGraph, InternalCitationOnly) {
    std::vector<corpus::PaperRecord> rs{rec("a", "A"), rec("b", "B"), rec("c", "C")};
    rs[0].outbound_citations = {"b", "zzz"};
    rs[1].outbound_citations = {"b"};
    auto r = build_graph(rs);
    ASSERT_EQ(r.graph.triples().size(), 1u);
    EXPECT_EQ(r.graph.triples()[0],
              (Triple{"http://skg.example.org/paper/a", Predicate::cites, "http://skg.example.org/paper/b"}));
    ASSERT_EQ(r.report.dropped_citations.size(), 2u);
    EXPECT_EQ(r.report.dropped_citations[0].target_id, "zzz");
    EXPECT_EQ(r.report.dropped_citations[1].reason, "self-citation");
}

TEST(BuildGraph, DeduplicatesNamedEntities) {
    std::vector<corpus::PaperRecord> rs{rec("a", "A"), rec("b", "B")};
    rs[0].authors = {"Ann  Lee"};
    rs[1].authors = {"ann lee", "Bo Kim"};
    rs[0].journal = "Journal of Visualization";
    rs[1].journal = "journal of visualization";
    rs[1].venue = "Journal of Visualization";
    auto g = build_graph(rs).graph;
    auto st = g.stats();
    EXPECT_EQ(st.entity_counts.at(EntityType::Author), 2u);
    EXPECT_EQ(st.entity_counts.at(EntityType::Journal), 1u);
    // Same name as a journal, different type and iri.
    EXPECT_EQ(st.entity_counts.at(EntityType::Conference), 1u);
    EXPECT_EQ(*g.find("http://skg.example.org/author/ann%20lee")->attribute("name"), "Ann Lee");
}

TEST(BuildGraph, CustomNamespace) {
    std::vector<corpus::PaperRecord> rs{rec("x/1", "A")};
    BuildOptions opt;
    opt.ns = "https://kg.test";
    auto g = build_graph(rs, opt).graph;
    EXPECT_EQ(g.entities()[0].iri, "https://kg.test/paper/x%2F1");
}

TEST(NormalizeConcept, LinkerCollapsesSynonyms) {
    StaticLinker linker;
    linker.add("LDA", res("http://dbpedia.org/resource/Latent_Dirichlet_allocation"));
    linker.add("Latent Dirichlet Allocation", res("http://dbpedia.org/resource/Latent_Dirichlet_allocation"));
    auto a = normalize_concept("LDA", &linker);
    auto b = normalize_concept("Latent  Dirichlet Allocation", &linker);
    EXPECT_EQ(a.canonical_name, "Latent Dirichlet allocation");
    EXPECT_EQ(a.canonical_name, b.canonical_name);
    EXPECT_EQ(a.dbpedia_url, "http://dbpedia.org/resource/Latent_Dirichlet_allocation");

    std::vector<corpus::PaperRecord> rs{rec("p1", "One"), rec("p2", "Two")};
    rs[0].concepts = {{"LDA", ConceptLabel::method}};
    rs[1].concepts = {{"Latent Dirichlet Allocation", ConceptLabel::application}};
    BuildOptions opt;
    opt.linker = &linker;
    auto g = build_graph(rs, opt).graph;
    auto concepts = g.entities_of_type(EntityType::Concept);
    ASSERT_EQ(concepts.size(), 1u);
    EXPECT_EQ(*g.entity(concepts[0]).attribute("dbpediaUrl"), "http://dbpedia.org/resource/Latent_Dirichlet_allocation");
    // One concept, two roles.
    EXPECT_EQ(g.stats().relation_counts.at(Predicate::hasMethod), 1u);
    EXPECT_EQ(g.stats().relation_counts.at(Predicate::hasApplication), 1u);
}

TEST(NormalizeConcept, NoMatchFallsBack) {
    StaticLinker linker;
    auto n = normalize_concept("  Topic   Model ", &linker);
    EXPECT_EQ(n.canonical_name, "topic model");
    EXPECT_FALSE(n.dbpedia_url);
    EXPECT_FALSE(n.warning);
    EXPECT_EQ(normalize_concept("Topic Model", nullptr).canonical_name, "topic model");
    EXPECT_THROW(normalize_concept("  ", nullptr), std::invalid_argument);
}

TEST(NormalizeConcept, ThresholdAndSurface) {
    StaticLinker linker;
    linker.add("Sankey", res("http://dbpedia.org/resource/Sankey_diagram", 0.3));
    EXPECT_FALSE(normalize_concept("Sankey", &linker).dbpedia_url);
    EXPECT_TRUE(normalize_concept("Sankey", &linker, 0.2).dbpedia_url);

    class Partial : public EntityLinkingClient {
    public:
        std::vector<LinkedResource> annotate(const std::string&, double) override {
            return {{"http://dbpedia.org/resource/Graph", "graph", 0.99}};
        }
    } partial;
    // The resource annotates only part of the surface.
    EXPECT_FALSE(normalize_concept("graph data", &partial).dbpedia_url);
}

TEST(NormalizeConcept, FiveMappingStub) {
    StaticLinker linker;
    linker.add("LDA", res("http://dbpedia.org/resource/Latent_Dirichlet_allocation"));
    linker.add("Latent Dirichlet Allocation", res("http://dbpedia.org/resource/Latent_Dirichlet_allocation"));
    linker.add("t-SNE", res("http://dbpedia.org/resource/T-distributed_stochastic_neighbor_embedding"));
    linker.add("word cloud", res("http://dbpedia.org/resource/Tag_cloud"));
    linker.add("Sankey", res("http://dbpedia.org/resource/Sankey_diagram", 0.3));

    // Hand count: {LDA, Latent Dirichlet Allocation} -> 1; t-SNE -> 1;
    // {word cloud, tag cloud} -> "Tag cloud" -> 1; {topic model, Topic  Model} -> 1;
    // Sankey below threshold -> local "sankey" -> 1. Total 5.
    std::vector<corpus::PaperRecord> rs{rec("p1", "One"), rec("p2", "Two"), rec("p3", "Three")};
    rs[0].concepts = {{"LDA", ConceptLabel::method}, {"t-SNE", ConceptLabel::method}, {"word cloud", ConceptLabel::visualization}};
    rs[1].concepts = {{"Latent Dirichlet Allocation", ConceptLabel::method}, {"tag cloud", ConceptLabel::visualization},
                      {"topic model", ConceptLabel::method}};
    rs[2].concepts = {{"Topic  Model", ConceptLabel::method}, {"Sankey", ConceptLabel::visualization}};
    CachingLinker cache(linker);
    BuildOptions opt;
    opt.linker = &cache;
    auto g = build_graph(rs, opt).graph;
    EXPECT_EQ(g.stats().entity_counts.at(EntityType::Concept), 5u);
    std::set<std::string> names;
    for (auto i : g.entities_of_type(EntityType::Concept))
        EXPECT_TRUE(names.insert(text::normalize_name(g.entity(i).display_name())).second);
    EXPECT_TRUE(names.count("tag cloud"));
    EXPECT_TRUE(names.count("sankey"));
    EXPECT_EQ(cache.calls(), 8u);  // distinct collapsed surfaces
    expect_conformant(g);
}

TEST(NormalizeConcept, TransportFailureWarns) {
    class Down : public EntityLinkingClient {
    public:
        std::vector<LinkedResource> annotate(const std::string&, double) override {
            throw LinkerTransportError("connection refused");
        }
    } down;
    auto n = normalize_concept("Word Cloud", &down);
    EXPECT_EQ(n.canonical_name, "word cloud");
    ASSERT_TRUE(n.warning);
    EXPECT_NE(n.warning->find("connection refused"), std::string::npos);

    std::vector<corpus::PaperRecord> rs{rec("p1", "One")};
    rs[0].concepts = {{"Word Cloud", ConceptLabel::visualization}};
    BuildOptions opt;
    opt.linker = &down;
    auto r = build_graph(rs, opt);
    EXPECT_EQ(r.graph.size(), 2u);
    EXPECT_EQ(r.report.warnings.size(), 1u);
}

TEST(KnowledgeGraph, RejectsInvalidInput) {
    Entity p{"urn:p", EntityType::Paper, {{"title", "T"}}};
    Entity a{"urn:a", EntityType::Author, {{"name", "A"}}};
    EXPECT_THROW(KnowledgeGraph({p, p}, {}), GraphError);
    EXPECT_THROW(KnowledgeGraph({Entity{"urn:q", EntityType::Paper, {}}}, {}), GraphError);
    EXPECT_THROW(KnowledgeGraph({p}, {{"urn:p", Predicate::creator, "urn:missing"}}), GraphError);
    EXPECT_THROW(KnowledgeGraph({p, a}, {{"urn:a", Predicate::creator, "urn:p"}}), GraphError);
    EXPECT_THROW(KnowledgeGraph({p, a}, {{"urn:p", Predicate::cites, "urn:a"}}), GraphError);
    KnowledgeGraph ok({a, p}, {{"urn:p", Predicate::creator, "urn:a"}, {"urn:p", Predicate::creator, "urn:a"}});
    EXPECT_EQ(ok.triples().size(), 1u);
    EXPECT_EQ(ok.entities()[0].iri, "urn:a");
}

TEST(KnowledgeGraph, NeighboursCollapseAndSkipSelfLoops) {
    Entity p{"urn:p", EntityType::Paper, {{"title", "T"}}};
    Entity c{"urn:c", EntityType::Concept, {{"name", "C"}}};
    KnowledgeGraph g({p, c}, {{"urn:p", Predicate::hasMethod, "urn:c"},
                              {"urn:p", Predicate::hasData, "urn:c"},
                              {"urn:p", Predicate::cites, "urn:p"}});
    auto pi = *g.index_of("urn:p");
    EXPECT_EQ(g.neighbors(pi).size(), 1u);
    EXPECT_EQ(g.arcs(pi).size(), 4u);  // two role arcs, the self-citation seen from both ends
    EXPECT_EQ(g.stats().relation_counts.at(Predicate::cites), 1u);
}

TEST(KnowledgeGraph, RandomBuildsConform) {
    std::mt19937 rng(3);
    for (int i = 0; i < 50; ++i)
        expect_conformant(fixtures::to_graph(fixtures::random_raw_graph(rng, 20)));
}
