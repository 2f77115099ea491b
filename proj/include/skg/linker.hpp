#pragma once

#include <nlohmann/json.hpp>

#include <chrono>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace skg {

// Raised when the linking service cannot be reached or answers with
// something unusable.
struct LinkerTransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LinkedResource {
    std::string uri;
    std::string surface_form;
    double similarity = 0.0;

    // Human-readable label derived from the resource URI
    // (".../resource/Latent_Dirichlet_allocation" -> "Latent Dirichlet allocation").
    std::string label() const;
};

class EntityLinkingClient {
public:
    virtual ~EntityLinkingClient() = default;
    virtual std::vector<LinkedResource> annotate(const std::string& text, double confidence) = 0;
};

// Parses a Spotlight /annotate JSON body. Accepts "Resources" or
// "resources" and keys with or without the '@' prefix; numeric fields may
// be strings.
std::vector<LinkedResource> parse_spotlight_response(const nlohmann::json& body);

// HTTP client for a DBpedia Spotlight compatible service:
// GET <base>/annotate?text=...&confidence=... with Accept: application/json.
class SpotlightClient final : public EntityLinkingClient {
public:
    explicit SpotlightClient(std::string base_url,
                             std::chrono::milliseconds timeout = std::chrono::seconds(10));
    std::vector<LinkedResource> annotate(const std::string& text, double confidence) override;

private:
    std::string origin_;  // scheme://host[:port]
    std::string path_;    // path prefix, no trailing slash
    std::chrono::milliseconds timeout_;
};

// Offline linker backed by a fixed surface -> resource table
// (case-insensitive, whitespace-collapsed keys).
class StaticLinker final : public EntityLinkingClient {
public:
    void add(const std::string& surface, LinkedResource resource);
    std::vector<LinkedResource> annotate(const std::string& text, double confidence) override;

private:
    std::map<std::string, LinkedResource> table_;
};

// Memoizes another client per (text, confidence). Thread-safe; failures are
// not cached.
class CachingLinker final : public EntityLinkingClient {
public:
    explicit CachingLinker(EntityLinkingClient& inner) : inner_(inner) {}
    std::vector<LinkedResource> annotate(const std::string& text, double confidence) override;
    std::size_t calls() const;

private:
    EntityLinkingClient& inner_;
    mutable std::mutex mu_;
    std::map<std::pair<std::string, double>, std::vector<LinkedResource>> cache_;
    std::size_t calls_ = 0;
};

}  // namespace skg
