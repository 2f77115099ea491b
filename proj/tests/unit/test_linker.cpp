#include "skg/graph.hpp"
#include "skg/linker.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <mutex>
#include <thread>

using namespace skg;
using nlohmann::json;

namespace {

// Minimal Spotlight stand-in on a local port.
class SpotlightStub {
public:
    SpotlightStub() {
        server_.Get("/rest/annotate", [this](const httplib::Request& req, httplib::Response& res) {
            {
                std::lock_guard lock(mu_);
                last_text_ = req.get_param_value("text");
                last_confidence_ = req.get_param_value("confidence");
                last_accept_ = req.get_header_value("Accept");
            }
            auto text = req.get_param_value("text");
            if (text == "boom") {
                res.status = 503;
                return;
            }
            if (text == "garbage") {
                res.set_content("not json", "text/plain");
                return;
            }
            json body{{"@text", text}, {"@confidence", req.get_param_value("confidence")}};
            if (text == "LDA" || text == "Latent Dirichlet Allocation")
                body["Resources"] = json::array({{{"@URI", "http://dbpedia.org/resource/Latent_Dirichlet_allocation"},
                                                  {"@surfaceForm", text},
                                                  {"@similarityScore", "0.98"}}});
            res.set_content(body.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~SpotlightStub() {
        server_.stop();
        thread_.join();
    }

    std::string base() const { return "http://127.0.0.1:" + std::to_string(port_) + "/rest"; }
    std::string last_text() {
        std::lock_guard lock(mu_);
        return last_text_;
    }
    std::string last_confidence() {
        std::lock_guard lock(mu_);
        return last_confidence_;
    }
    std::string last_accept() {
        std::lock_guard lock(mu_);
        return last_accept_;
    }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    std::mutex mu_;
    std::string last_text_, last_confidence_, last_accept_;
};

}  // namespace

TEST(SpotlightParse, Shapes) {
    auto a = parse_spotlight_response(json::parse(R"({"Resources": [{"@URI": "http://dbpedia.org/resource/Tag_cloud",
        "@surfaceForm": "word cloud", "@similarityScore": "0.75"}]})"));
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a[0].label(), "Tag cloud");
    EXPECT_DOUBLE_EQ(a[0].similarity, 0.75);

    auto b = parse_spotlight_response(json::parse(R"({"resources": [{"URI": "http://x/Y%C3%A9_z", "surfaceForm": "y",
        "similarityScore": 0.5}]})"));
    EXPECT_EQ(b[0].label(), "Y\xC3\xA9 z");
    EXPECT_TRUE(parse_spotlight_response(json::parse(R"({"@text": "nothing"})")).empty());
    EXPECT_THROW(parse_spotlight_response(json::parse(R"({"Resources": 3})")), LinkerTransportError);
    EXPECT_THROW(parse_spotlight_response(json::parse(R"({"Resources": [{"@surfaceForm": "x"}]})")),
                 LinkerTransportError);
}

TEST(SpotlightClient, TalksToStub) {
    SpotlightStub stub;
    SpotlightClient client(stub.base());
    auto r = client.annotate("LDA", 0.5);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].uri, "http://dbpedia.org/resource/Latent_Dirichlet_allocation");
    EXPECT_NEAR(r[0].similarity, 0.98, 1e-12);
    EXPECT_EQ(stub.last_text(), "LDA");
    EXPECT_NEAR(std::stod(stub.last_confidence()), 0.5, 1e-12);
    EXPECT_EQ(stub.last_accept(), "application/json");
    EXPECT_TRUE(client.annotate("word cloud", 0.5).empty());
    EXPECT_THROW(client.annotate("boom", 0.5), LinkerTransportError);
    EXPECT_THROW(client.annotate("garbage", 0.5), LinkerTransportError);
}

TEST(SpotlightClient, BuildDedupsThroughService) {
    SpotlightStub stub;
    SpotlightClient client(stub.base());
    std::vector<corpus::PaperRecord> rs(2);
    rs[0].id = "a";
    rs[0].title = "A";
    rs[0].concepts = {{"LDA", ConceptLabel::method}};
    rs[1].id = "b";
    rs[1].title = "B";
    rs[1].concepts = {{"Latent Dirichlet Allocation", ConceptLabel::method}, {"word cloud", ConceptLabel::visualization}};
    BuildOptions opt;
    opt.linker = &client;
    auto r = build_graph(rs, opt);
    EXPECT_EQ(r.graph.stats().entity_counts.at(EntityType::Concept), 2u);
    EXPECT_TRUE(r.report.warnings.empty());
    EXPECT_TRUE(r.graph.find("http://skg.example.org/concept/latent%20dirichlet%20allocation"));
}

TEST(SpotlightClient, UnreachableServiceFallsBack) {
    int port;
    {
        httplib::Server probe;
        port = probe.bind_to_any_port("127.0.0.1");
    }
    SpotlightClient client("http://127.0.0.1:" + std::to_string(port), std::chrono::milliseconds(500));
    EXPECT_THROW(client.annotate("LDA", 0.5), LinkerTransportError);
    auto n = normalize_concept("LDA", &client);
    EXPECT_EQ(n.canonical_name, "lda");
    EXPECT_TRUE(n.warning);
    EXPECT_THROW(SpotlightClient("localhost:2222"), std::invalid_argument);
}

TEST(CachingLinker, MemoizesPerSurface) {
    StaticLinker inner;
    inner.add("LDA", {"http://dbpedia.org/resource/Latent_Dirichlet_allocation", "", 0.9});
    CachingLinker cache(inner);
    cache.annotate("LDA", 0.5);
    cache.annotate("LDA", 0.5);
    cache.annotate("LDA", 0.6);
    EXPECT_EQ(cache.calls(), 2u);
}
