#include "skg/graph.hpp"

#include "skg/linker.hpp"
#include "skg/text.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_set>

namespace skg {

using nlohmann::json;

const std::string& Entity::display_name() const {
    static const std::string empty;
    auto* v = attribute(name_attribute(type));
    return v ? *v : empty;
}

const std::string* Entity::attribute(std::string_view key) const {
    auto it = attributes.find(std::string(key));
    return it == attributes.end() ? nullptr : &it->second;
}

json stats_to_json(const GraphStats& s) {
    json entities = json::object();
    for (auto [t, n] : s.entity_counts)
        entities[std::string(to_string(t))] = n;
    json relations = json::object();
    for (auto [p, n] : s.relation_counts)
        relations[std::string(to_string(p))] = n;
    return {{"entities", entities}, {"relations", relations}};
}

KnowledgeGraph::KnowledgeGraph(std::vector<Entity> entities, std::vector<Triple> triples)
    : entities_(std::move(entities)), triples_(std::move(triples)) {
    std::sort(entities_.begin(), entities_.end(),
              [](const Entity& a, const Entity& b) { return a.iri < b.iri; });
    by_iri_.reserve(entities_.size());
    for (std::size_t i = 0; i < entities_.size(); ++i) {
        const auto& e = entities_[i];
        if (e.iri.empty())
            throw GraphError("entity with empty iri");
        if (!by_iri_.emplace(e.iri, static_cast<Index>(i)).second)
            throw GraphError("duplicate entity iri " + e.iri);
        if (text::trim(e.display_name()).empty())
            throw GraphError(std::string(to_string(e.type)) + " " + e.iri + " lacks required attribute '" +
                             std::string(name_attribute(e.type)) + "'");
    }

    std::sort(triples_.begin(), triples_.end());
    triples_.erase(std::unique(triples_.begin(), triples_.end()), triples_.end());

    neighbors_.assign(entities_.size(), {});
    arcs_.assign(entities_.size(), {});
    for (const auto& t : triples_) {
        auto s = index_of(t.s);
        auto o = index_of(t.o);
        if (!s || !o)
            throw GraphError("triple " + t.s + " " + std::string(to_string(t.p)) + " " + t.o +
                             " references an unknown entity");
        if (!conforms(entities_[*s].type, t.p, entities_[*o].type))
            throw GraphError("triple " + t.s + " " + std::string(to_string(t.p)) + " " + t.o +
                             " violates the ontology domain/range");
        arcs_[*s].push_back({t.p, *o, true});
        arcs_[*o].push_back({t.p, *s, false});
        if (*s != *o) {
            neighbors_[*s].push_back(*o);
            neighbors_[*o].push_back(*s);
        }
    }
    for (auto& n : neighbors_) {
        std::sort(n.begin(), n.end());
        n.erase(std::unique(n.begin(), n.end()), n.end());
    }
}

std::optional<KnowledgeGraph::Index> KnowledgeGraph::index_of(std::string_view iri) const {
    auto it = by_iri_.find(std::string(iri));
    if (it == by_iri_.end())
        return std::nullopt;
    return it->second;
}

const Entity* KnowledgeGraph::find(std::string_view iri) const {
    auto i = index_of(iri);
    return i ? &entities_[*i] : nullptr;
}

std::vector<KnowledgeGraph::Index> KnowledgeGraph::entities_of_type(EntityType t) const {
    std::vector<Index> out;
    for (std::size_t i = 0; i < entities_.size(); ++i)
        if (entities_[i].type == t)
            out.push_back(static_cast<Index>(i));
    return out;
}

GraphStats KnowledgeGraph::stats() const {
    GraphStats s;
    for (auto t : kEntityTypes)
        s.entity_counts[t] = 0;
    for (auto p : kPredicates)
        s.relation_counts[p] = 0;
    for (const auto& e : entities_)
        ++s.entity_counts[e.type];
    for (const auto& t : triples_)
        ++s.relation_counts[t.p];
    return s;
}

GraphStats graph_stats(const KnowledgeGraph& g) {
    return g.stats();
}

std::string make_iri(std::string_view ns, EntityType type, std::string_view key) {
    std::string base(ns);
    while (!base.empty() && base.back() == '/')
        base.pop_back();
    return base + "/" + text::to_lower(to_string(type)) + "/" + text::url_encode(key);
}

NormalizedConcept normalize_concept(std::string_view surface, EntityLinkingClient* linker, double threshold) {
    auto collapsed = text::collapse_whitespace(surface);
    if (collapsed.empty())
        throw std::invalid_argument("concept surface must be non-empty");

    NormalizedConcept out{text::to_lower(collapsed), std::nullopt, std::nullopt};
    if (!linker)
        return out;

    std::vector<LinkedResource> resources;
    try {
        resources = linker->annotate(collapsed, threshold);
    } catch (const LinkerTransportError& e) {
        out.warning = "entity linking failed for '" + collapsed + "': " + e.what();
        return out;
    }

    const LinkedResource* best = nullptr;
    for (const auto& r : resources) {
        if (r.similarity < threshold)
            continue;
        // Only a resource annotating the whole surface renames the concept.
        if (!r.surface_form.empty() && !text::equals_icase(text::collapse_whitespace(r.surface_form), collapsed))
            continue;
        if (!best || r.similarity > best->similarity || (r.similarity == best->similarity && r.uri < best->uri))
            best = &r;
    }
    if (best) {
        out.canonical_name = best->label();
        out.dbpedia_url = best->uri;
    }
    return out;
}

namespace {

class GraphAssembler {
public:
    explicit GraphAssembler(std::string ns) : ns_(std::move(ns)) {}

    std::string upsert(EntityType type, const std::string& key, const std::string& name_attr,
                       const std::string& name) {
        auto iri = make_iri(ns_, type, key);
        auto [it, inserted] = entities_.try_emplace(iri);
        if (inserted) {
            it->second.iri = iri;
            it->second.type = type;
            it->second.attributes[name_attr] = name;
        }
        return iri;
    }

    Entity& at(const std::string& iri) { return entities_.at(iri); }

    void relate(const std::string& s, Predicate p, const std::string& o) { triples_.push_back({s, p, o}); }

    KnowledgeGraph finish() {
        std::vector<Entity> es;
        es.reserve(entities_.size());
        for (auto& [iri, e] : entities_)
            es.push_back(std::move(e));
        return KnowledgeGraph(std::move(es), std::move(triples_));
    }

private:
    std::string ns_;
    std::map<std::string, Entity> entities_;
    std::vector<Triple> triples_;
};

std::map<std::string, NormalizedConcept> normalize_all(std::span<const corpus::PaperRecord> records,
                                                       const BuildOptions& options) {
    std::set<std::string> surfaces;
    for (const auto& r : records)
        for (const auto& c : r.concepts)
            surfaces.insert(text::collapse_whitespace(c.surface));
    std::vector<std::string> todo(surfaces.begin(), surfaces.end());

    std::vector<NormalizedConcept> results(todo.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < todo.size(); i = next++)
            results[i] = normalize_concept(todo[i], options.linker, options.link_threshold);
    };

    std::size_t threads = options.linker ? std::max<std::size_t>(1, options.linker_parallelism) : 1;
    threads = std::min(threads, std::max<std::size_t>(1, todo.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }

    std::map<std::string, NormalizedConcept> out;
    for (std::size_t i = 0; i < todo.size(); ++i)
        out.emplace(todo[i], std::move(results[i]));
    return out;
}

}  // namespace

BuildResult build_graph(std::span<const corpus::PaperRecord> records, const BuildOptions& options) {
    BuildResult result;
    GraphAssembler g(options.ns);

    std::unordered_map<std::string, std::string> paper_iri;
    for (const auto& r : records) {
        auto iri = g.upsert(EntityType::Paper, r.id, "title", r.title);
        auto& paper = g.at(iri);
        paper.attributes["sourceId"] = r.id;
        if (r.year)
            paper.attributes["year"] = std::to_string(*r.year);
        if (r.url && !r.url->empty())
            paper.attributes["url"] = *r.url;
        paper_iri.emplace(r.id, iri);
    }

    auto normalized = normalize_all(records, options);
    for (const auto& [surface, n] : normalized)
        if (n.warning)
            result.report.warnings.push_back(*n.warning);

    for (const auto& r : records) {
        const auto& pid = paper_iri.at(r.id);

        for (const auto& author : r.authors) {
            auto name = text::collapse_whitespace(author);
            if (name.empty())
                continue;
            g.relate(pid, Predicate::creator, g.upsert(EntityType::Author, text::to_lower(name), "name", name));
        }
        if (r.journal) {
            auto name = text::collapse_whitespace(*r.journal);
            if (!name.empty())
                g.relate(pid, Predicate::appearsInJournal,
                         g.upsert(EntityType::Journal, text::to_lower(name), "name", name));
        }
        if (r.venue) {
            auto name = text::collapse_whitespace(*r.venue);
            if (!name.empty())
                g.relate(pid, Predicate::appearsInConference,
                         g.upsert(EntityType::Conference, text::to_lower(name), "name", name));
        }
        for (const auto& target : r.outbound_citations) {
            auto it = paper_iri.find(target);
            if (it == paper_iri.end()) {
                result.report.dropped_citations.push_back({r.id, target, "target not in corpus"});
                continue;
            }
            if (target == r.id) {
                result.report.dropped_citations.push_back({r.id, target, "self-citation"});
                continue;
            }
            g.relate(pid, Predicate::cites, it->second);
        }
        for (const auto& c : r.concepts) {
            const auto& n = normalized.at(text::collapse_whitespace(c.surface));
            auto iri = g.upsert(EntityType::Concept, text::normalize_name(n.canonical_name), "name", n.canonical_name);
            if (n.dbpedia_url) {
                auto& concept_entity = g.at(iri);
                concept_entity.attributes.try_emplace("dbpediaUrl", *n.dbpedia_url);
            }
            g.relate(pid, role_predicate(c.label), iri);
        }
    }

    result.graph = g.finish();
    return result;
}

json entity_to_json(const Entity& e) {
    return {{"iri", e.iri}, {"type", to_string(e.type)}, {"attributes", e.attributes}};
}

}  // namespace skg
