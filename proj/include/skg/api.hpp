#pragma once

#include "skg/graph.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace httplib {
class Server;
}

namespace skg::api {

enum class ErrorCode { bad_request, not_found, validation_failed, internal };

std::string_view to_string(ErrorCode c);
int http_status(ErrorCode c);

struct ApiError {
    ErrorCode code = ErrorCode::internal;
    std::string message;
    nlohmann::json details = nlohmann::json::object();

    nlohmann::json to_json() const;  // {"error": {code, message, details}}
};

struct Response {
    int status = 200;
    nlohmann::json body;
};

Response error_response(const ApiError& e);

// Request handlers over an immutable graph. No HTTP involved; the server
// below is a thin transport around these.
class Service {
public:
    explicit Service(std::shared_ptr<const KnowledgeGraph> graph);

    Response stats() const;
    Response healthz() const;
    // q (comma-separated terms), type (default Concept), limit (default 20), offset (default 0)
    Response search(const std::map<std::string, std::string>& params) const;
    Response concept_detail(std::string_view iri) const;
    Response validate(std::string_view pipeline_body) const;
    Response execute(std::string_view pipeline_body) const;

    const KnowledgeGraph& graph() const { return *graph_; }

private:
    std::shared_ptr<const KnowledgeGraph> graph_;
};

struct StartupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ServerConfig {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string graph_path;   // Turtle file
    std::string corpus_path;  // or a corpus to build from
    std::string ns = std::string(kDefaultNamespace);
    std::string linker_url;   // empty: no entity linking when building from a corpus
    double link_threshold = kDefaultLinkConfidence;
};

// SKG_PORT, SKG_HOST, SKG_NAMESPACE, SKG_LINKER_URL override the matching fields.
ServerConfig apply_env(ServerConfig config);

// Loads the Turtle file, or builds from the corpus. Throws StartupError.
std::shared_ptr<const KnowledgeGraph> load_graph(const ServerConfig& config);

class HttpServer {
public:
    explicit HttpServer(const Service& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Port 0 picks a free port. Returns the bound port; throws StartupError.
    int bind(const std::string& host, int port);
    // Blocks until stop().
    void listen();
    void stop();
    void wait_until_ready() const;

private:
    const Service& service_;
    std::unique_ptr<httplib::Server> server_;
};

// Loads the graph and serves until the process is stopped.
void serve(const ServerConfig& config);

}  // namespace skg::api
