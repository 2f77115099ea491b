#include "skg/linker.hpp"

#include "skg/text.hpp"

#include <httplib.h>

#include <algorithm>

namespace skg {

using nlohmann::json;

namespace {

const json* field(const json& obj, const std::string& key) {
    if (auto it = obj.find("@" + key); it != obj.end())
        return &*it;
    if (auto it = obj.find(key); it != obj.end())
        return &*it;
    return nullptr;
}

std::string string_field(const json& obj, const std::string& key) {
    auto* v = field(obj, key);
    if (!v || v->is_null())
        return {};
    if (v->is_string())
        return v->get<std::string>();
    return v->dump();
}

double number_field(const json& obj, const std::string& key) {
    auto* v = field(obj, key);
    if (!v || v->is_null())
        return 0.0;
    if (v->is_number())
        return v->get<double>();
    if (v->is_string()) {
        try {
            return std::stod(v->get<std::string>());
        } catch (const std::exception&) {
            throw LinkerTransportError("non-numeric " + key + " '" + v->get<std::string>() + "'");
        }
    }
    throw LinkerTransportError("non-numeric " + key);
}

}  // namespace

std::string LinkedResource::label() const {
    auto slash = uri.find_last_of("/#");
    std::string tail = slash == std::string::npos ? uri : uri.substr(slash + 1);
    tail = text::url_decode(tail);
    std::replace(tail.begin(), tail.end(), '_', ' ');
    tail = text::collapse_whitespace(tail);
    return tail.empty() ? surface_form : tail;
}

std::vector<LinkedResource> parse_spotlight_response(const json& body) {
    if (!body.is_object())
        throw LinkerTransportError("linker response is not a JSON object");
    const json* resources = nullptr;
    if (auto it = body.find("Resources"); it != body.end())
        resources = &*it;
    else if (auto it2 = body.find("resources"); it2 != body.end())
        resources = &*it2;
    if (!resources || resources->is_null())
        return {};
    if (!resources->is_array())
        throw LinkerTransportError("linker 'Resources' is not an array");

    std::vector<LinkedResource> out;
    for (const auto& r : *resources) {
        if (!r.is_object())
            throw LinkerTransportError("linker resource is not an object");
        LinkedResource res{string_field(r, "URI"), string_field(r, "surfaceForm"), number_field(r, "similarityScore")};
        if (res.uri.empty())
            throw LinkerTransportError("linker resource without URI");
        out.push_back(std::move(res));
    }
    return out;
}

SpotlightClient::SpotlightClient(std::string base_url, std::chrono::milliseconds timeout)
    : timeout_(timeout) {
    auto scheme = base_url.find("://");
    if (scheme == std::string::npos)
        throw std::invalid_argument("linker base URL needs a scheme: " + base_url);
    auto path = base_url.find('/', scheme + 3);
    if (path == std::string::npos) {
        origin_ = base_url;
    } else {
        origin_ = base_url.substr(0, path);
        path_ = base_url.substr(path);
    }
    while (!path_.empty() && path_.back() == '/')
        path_.pop_back();
}

std::vector<LinkedResource> SpotlightClient::annotate(const std::string& text, double confidence) {
    httplib::Client cli(origin_);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    cli.set_connection_timeout(secs.count(), usecs.count());
    cli.set_read_timeout(secs.count(), usecs.count());

    httplib::Params params{{"text", text}, {"confidence", std::to_string(confidence)}};
    httplib::Headers headers{{"Accept", "application/json"}};
    auto res = cli.Get(path_ + "/annotate", params, headers);
    if (!res)
        throw LinkerTransportError("linker request failed: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw LinkerTransportError("linker returned HTTP " + std::to_string(res->status));
    try {
        return parse_spotlight_response(json::parse(res->body));
    } catch (const json::exception& e) {
        throw LinkerTransportError(std::string("linker returned invalid JSON: ") + e.what());
    }
}

void StaticLinker::add(const std::string& surface, LinkedResource resource) {
    if (resource.surface_form.empty())
        resource.surface_form = surface;
    table_[text::normalize_name(surface)] = std::move(resource);
}

std::vector<LinkedResource> StaticLinker::annotate(const std::string& text, double /*confidence*/) {
    auto it = table_.find(text::normalize_name(text));
    if (it == table_.end())
        return {};
    auto r = it->second;
    r.surface_form = text;
    return {r};
}

std::vector<LinkedResource> CachingLinker::annotate(const std::string& text, double confidence) {
    auto key = std::pair(text, confidence);
    {
        std::lock_guard lock(mu_);
        if (auto it = cache_.find(key); it != cache_.end())
            return it->second;
    }
    auto result = inner_.annotate(text, confidence);
    std::lock_guard lock(mu_);
    ++calls_;
    cache_.emplace(key, result);
    return result;
}

std::size_t CachingLinker::calls() const {
    std::lock_guard lock(mu_);
    return calls_;
}

}  // namespace skg
