#include "skg/api.hpp"

#include "skg/corpus.hpp"
#include "skg/dataflow.hpp"
#include "skg/linker.hpp"
#include "skg/query.hpp"
#include "skg/turtle.hpp"

#include <httplib.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>

namespace skg::api {

using nlohmann::json;

std::string_view to_string(ErrorCode c) {
    switch (c) {
    case ErrorCode::bad_request: return "bad_request";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::validation_failed: return "validation_failed";
    case ErrorCode::internal: return "internal";
    }
    return "internal";
}

int http_status(ErrorCode c) {
    switch (c) {
    case ErrorCode::bad_request: return 400;
    case ErrorCode::not_found: return 404;
    case ErrorCode::validation_failed: return 422;
    case ErrorCode::internal: return 500;
    }
    return 500;
}

json ApiError::to_json() const {
    return {{"error", {{"code", to_string(code)}, {"message", message}, {"details", details}}}};
}

Response error_response(const ApiError& e) {
    return {http_status(e.code), e.to_json()};
}

namespace {

std::size_t parse_count(const std::map<std::string, std::string>& params, const std::string& key,
                        std::size_t fallback, std::size_t max) {
    auto it = params.find(key);
    if (it == params.end() || it->second.empty())
        return fallback;
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(it->second, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != it->second.size() || it->second[0] == '-' || v > max)
        throw ApiError{ErrorCode::bad_request, "'" + key + "' must be an integer in [0, " + std::to_string(max) + "]",
                       {{"field", key}}};
    return static_cast<std::size_t>(v);
}

dataflow::Pipeline parse_pipeline_body(std::string_view body) {
    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::exception& e) {
        throw ApiError{ErrorCode::bad_request, std::string("request body is not valid JSON: ") + e.what(), json::object()};
    }
    try {
        return dataflow::pipeline_from_json(doc);
    } catch (const dataflow::PipelineFormatError& e) {
        throw ApiError{ErrorCode::bad_request, e.what(), json::object()};
    }
}

template <class F>
Response guarded(F&& f) {
    try {
        return f();
    } catch (const ApiError& e) {
        return error_response(e);
    } catch (const std::exception& e) {
        return error_response({ErrorCode::internal, e.what(), json::object()});
    }
}

}  // namespace

Service::Service(std::shared_ptr<const KnowledgeGraph> graph) : graph_(std::move(graph)) {
    if (!graph_)
        throw std::invalid_argument("service needs a graph");
}

Response Service::stats() const {
    return {200, stats_to_json(graph_stats(*graph_))};
}

Response Service::healthz() const {
    return {200, {{"status", "ok"}, {"stats", stats_to_json(graph_stats(*graph_))}}};
}

Response Service::search(const std::map<std::string, std::string>& params) const {
    return guarded([&]() -> Response {
        auto q = params.find("q");
        auto terms = q == params.end() ? std::vector<std::string>{} : query::split_terms(q->second);
        if (terms.empty())
            throw ApiError{ErrorCode::bad_request, "query parameter 'q' is required", {{"field", "q"}}};
        auto type = EntityType::Concept;
        if (auto t = params.find("type"); t != params.end() && !t->second.empty()) {
            auto parsed = parse_entity_type(t->second);
            if (!parsed)
                throw ApiError{ErrorCode::bad_request, "unknown entity type '" + t->second + "'", {{"field", "type"}}};
            type = *parsed;
        }
        auto limit = parse_count(params, "limit", 20, 1000);
        auto offset = parse_count(params, "offset", 0, 1'000'000'000);

        json results = json::array();
        for (const auto& iri : query::fuzzy_query(*graph_, terms, type, limit, offset)) {
            const auto* e = graph_->find(iri);
            results.push_back({{"iri", iri}, {"type", skg::to_string(e->type)}, {"name", e->display_name()}});
        }
        return {200,
                {{"terms", terms},
                 {"type", skg::to_string(type)},
                 {"limit", limit},
                 {"offset", offset},
                 {"results", results}}};
    });
}

Response Service::concept_detail(std::string_view iri) const {
    return guarded([&]() -> Response {
        auto idx = graph_->index_of(iri);
        if (!idx || graph_->entity(*idx).type != EntityType::Concept)
            throw ApiError{ErrorCode::not_found, "no concept " + std::string(iri), {{"iri", iri}}};
        const auto& e = graph_->entity(*idx);

        json roles = json::object();
        for (auto l : kConceptLabels)
            roles[std::string(skg::to_string(l))] = 0;
        std::set<KnowledgeGraph::Index> papers;
        for (const auto& arc : graph_->arcs(*idx)) {
            if (auto role = predicate_role(arc.predicate)) {
                roles[std::string(skg::to_string(*role))] = roles[std::string(skg::to_string(*role))].get<int>() + 1;
                papers.insert(arc.other);
            }
        }
        auto body = entity_to_json(e);
        auto* url = e.attribute("dbpediaUrl");
        body["dbpedia_url"] = url ? json(*url) : json(nullptr);
        body["roles"] = roles;
        body["papers"] = papers.size();
        return {200, body};
    });
}

Response Service::validate(std::string_view pipeline_body) const {
    return guarded([&]() -> Response {
        auto violations = dataflow::validate(parse_pipeline_body(pipeline_body));
        return {200, {{"valid", violations.empty()}, {"violations", dataflow::violations_to_json(violations)}}};
    });
}

Response Service::execute(std::string_view pipeline_body) const {
    return guarded([&]() -> Response {
        auto pipeline = parse_pipeline_body(pipeline_body);
        try {
            return {200, dataflow::trace_to_json(dataflow::execute(pipeline, *graph_))};
        } catch (const dataflow::InvalidPipeline& e) {
            std::set<std::string> named;
            for (const auto& v : e.violations)
                named.insert(v.components.begin(), v.components.end());
            throw ApiError{ErrorCode::validation_failed,
                           e.what(),
                           {{"violations", dataflow::violations_to_json(e.violations)},
                            {"components", std::vector<std::string>(named.begin(), named.end())}}};
        }
    });
}

ServerConfig apply_env(ServerConfig config) {
    if (const char* v = std::getenv("SKG_PORT"); v && *v) {
        try {
            config.port = std::stoi(v);
        } catch (const std::exception&) {
            throw StartupError(std::string("SKG_PORT is not a port number: ") + v);
        }
    }
    if (const char* v = std::getenv("SKG_HOST"); v && *v)
        config.host = v;
    if (const char* v = std::getenv("SKG_NAMESPACE"); v && *v)
        config.ns = v;
    if (const char* v = std::getenv("SKG_LINKER_URL"); v && *v)
        config.linker_url = v;
    return config;
}

std::shared_ptr<const KnowledgeGraph> load_graph(const ServerConfig& config) {
    try {
        if (!config.graph_path.empty())
            return std::make_shared<const KnowledgeGraph>(turtle::load_turtle_file(config.graph_path));
        if (!config.corpus_path.empty()) {
            std::ifstream in(config.corpus_path);
            if (!in)
                throw std::runtime_error("cannot open corpus file " + config.corpus_path);
            auto parsed = corpus::parse_corpus(in);
            std::unique_ptr<SpotlightClient> linker;
            BuildOptions options;
            options.ns = config.ns;
            options.link_threshold = config.link_threshold;
            if (!config.linker_url.empty()) {
                linker = std::make_unique<SpotlightClient>(config.linker_url);
                options.linker = linker.get();
            }
            auto built = build_graph(parsed.records, options);
            return std::make_shared<const KnowledgeGraph>(std::move(built.graph));
        }
    } catch (const std::exception& e) {
        throw StartupError(std::string("failed to load graph: ") + e.what());
    }
    throw StartupError("no graph configured (need a Turtle file or a corpus)");
}

HttpServer::HttpServer(const Service& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
    auto reply = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };

    server_->Get("/healthz", [this, reply](const httplib::Request&, httplib::Response& res) {
        reply(res, service_.healthz());
    });
    server_->Get("/stats", [this, reply](const httplib::Request&, httplib::Response& res) {
        reply(res, service_.stats());
    });
    server_->Get("/entities/search", [this, reply](const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> params;
        for (const auto& [k, v] : req.params)
            params.emplace(k, v);
        reply(res, service_.search(params));
    });
    server_->Get("/concepts/(.+)", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, service_.concept_detail(req.matches[1].str()));
    });
    server_->Post("/pipelines/validate", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, service_.validate(req.body));
    });
    server_->Post("/pipelines/execute", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, service_.execute(req.body));
    });

    server_->set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty())
            return httplib::Server::HandlerResponse::Unhandled;
        ErrorCode code = res.status == 404 ? ErrorCode::not_found
                         : res.status >= 500 ? ErrorCode::internal
                                             : ErrorCode::bad_request;
        auto message = res.status == 404 ? "no route for " + req.method + " " + req.path
                                         : "request failed with HTTP " + std::to_string(res.status);
        res.set_content(ApiError{code, message, json::object()}.to_json().dump(), "application/json");
        return httplib::Server::HandlerResponse::Handled;
    });
    server_->set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "unexpected failure";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            message = e.what();
        } catch (...) {
        }
        res.status = 500;
        res.set_content(ApiError{ErrorCode::internal, message, json::object()}.to_json().dump(), "application/json");
    });
}

HttpServer::~HttpServer() {
    stop();
}

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        int bound = server_->bind_to_any_port(host);
        if (bound < 0)
            throw StartupError("could not bind to " + host + " on any port");
        return bound;
    }
    if (!server_->bind_to_port(host, port))
        throw StartupError("could not bind to " + host + ":" + std::to_string(port));
    return port;
}

void HttpServer::listen() {
    server_->listen_after_bind();
}

void HttpServer::stop() {
    if (server_)
        server_->stop();
}

void HttpServer::wait_until_ready() const {
    server_->wait_until_ready();
}

void serve(const ServerConfig& config) {
    auto graph = load_graph(config);
    Service service(graph);
    HttpServer server(service);
    int port = server.bind(config.host, config.port);
    auto s = graph_stats(*graph);
    std::size_t entities = 0;
    for (auto [t, n] : s.entity_counts)
        entities += n;
    std::cerr << "serving " << entities << " entities on http://" << config.host << ":" << port << "\n";
    server.listen();
}

}  // namespace skg::api
