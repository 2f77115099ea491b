#include "skg/query.hpp"

#include "skg/text.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace skg::query {

using Index = KnowledgeGraph::Index;
using nlohmann::json;

std::set<std::pair<EntityType, EntityType>> ontology_edges() {
    std::set<std::pair<EntityType, EntityType>> out;
    for (auto p : kPredicates) {
        auto sig = signature(p);
        out.insert({sig.domain, sig.range});
        out.insert({sig.range, sig.domain});
    }
    return out;
}

int ontology_distance(EntityType a, EntityType b) {
    static const auto edges = ontology_edges();
    if (a == b) {
        if (edges.count({a, a}))
            return 1;
        for (auto t : kEntityTypes)
            if (edges.count({a, t}))
                return 2;
        throw QueryError("entity type is isolated in the ontology");
    }
    std::map<EntityType, int> dist{{a, 0}};
    std::deque<EntityType> queue{a};
    while (!queue.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        for (auto t : kEntityTypes) {
            if (!edges.count({cur, t}) || dist.count(t))
                continue;
            dist[t] = dist[cur] + 1;
            if (t == b)
                return dist[t];
            queue.push_back(t);
        }
    }
    throw QueryError("ontology is disconnected");
}

std::vector<std::string> split_terms(std::string_view input) {
    std::vector<std::string> out;
    for (auto& part : text::split(input, ',')) {
        auto t = text::collapse_whitespace(part);
        if (!t.empty())
            out.push_back(std::move(t));
    }
    return out;
}

std::vector<FuzzyMatch> fuzzy_matches(const KnowledgeGraph& g, std::span<const std::string> terms, EntityType type) {
    std::vector<std::string> normalized_terms;
    for (const auto& t : terms) {
        auto n = text::normalize_name(t);
        if (!n.empty())
            normalized_terms.push_back(std::move(n));
    }
    if (normalized_terms.empty())
        throw QueryError("at least one non-empty search term is required");

    std::vector<FuzzyMatch> out;
    for (auto idx : g.entities_of_type(type)) {
        const auto& e = g.entity(idx);
        auto name = text::normalize_name(e.display_name());
        std::optional<FuzzyMatch> best;
        auto offer = [&](int tier, std::size_t quality) {
            if (!best || std::pair(tier, quality) < std::pair(best->tier, best->quality))
                best = FuzzyMatch{e.iri, tier, quality};
        };
        for (const auto& term : normalized_terms) {
            if (name == term) {
                offer(0, 0);
            } else if (name.find(term) != std::string::npos) {
                offer(1, name.size() - term.size());
            } else {
                auto limit = static_cast<std::size_t>(0.2 * static_cast<double>(term.size()));
                if (limit == 0)
                    continue;
                auto d = text::edit_distance(term, name, limit);
                if (d <= limit)
                    offer(2, d);
            }
        }
        if (best)
            out.push_back(std::move(*best));
    }
    std::sort(out.begin(), out.end(), [](const FuzzyMatch& a, const FuzzyMatch& b) {
        return std::tie(a.tier, a.quality, a.iri) < std::tie(b.tier, b.quality, b.iri);
    });
    return out;
}

std::vector<std::string> fuzzy_query(const KnowledgeGraph& g, std::span<const std::string> terms, EntityType type,
                                     std::size_t limit, std::size_t offset) {
    auto matches = fuzzy_matches(g, terms, type);
    std::vector<std::string> out;
    for (std::size_t i = offset; i < matches.size() && out.size() < limit; ++i)
        out.push_back(matches[i].iri);
    return out;
}

namespace {

Index require(const KnowledgeGraph& g, std::string_view iri) {
    auto i = g.index_of(iri);
    if (!i)
        throw QueryError("unknown entity " + std::string(iri));
    return *i;
}

void check_cutoff(int cutoff) {
    if (cutoff < 1)
        throw QueryError("cutoff must be at least 1");
}

void dfs_count(const KnowledgeGraph& g, Index v, int remaining, std::vector<char>& on_path,
               std::map<Index, std::size_t>& counts) {
    for (auto n : g.neighbors(v)) {
        if (on_path[n])
            continue;
        ++counts[n];
        if (remaining > 1) {
            on_path[n] = 1;
            dfs_count(g, n, remaining - 1, on_path, counts);
            on_path[n] = 0;
        }
    }
}

template <class T>
void sort_unique(std::vector<T>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::map<Index, std::size_t> count_simple_paths(const KnowledgeGraph& g, Index source, int cutoff) {
    check_cutoff(cutoff);
    std::map<Index, std::size_t> counts;
    std::vector<char> on_path(g.size(), 0);
    on_path[source] = 1;
    dfs_count(g, source, cutoff, on_path, counts);
    return counts;
}

std::set<std::string> reachable(const KnowledgeGraph& g, std::string_view iri, int cutoff) {
    check_cutoff(cutoff);
    auto start = require(g, iri);
    std::vector<int> depth(g.size(), -1);
    depth[start] = 0;
    std::deque<Index> queue{start};
    std::set<std::string> out;
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        if (depth[v] == cutoff)
            continue;
        for (auto n : g.neighbors(v)) {
            if (depth[n] >= 0)
                continue;
            depth[n] = depth[v] + 1;
            out.insert(g.entity(n).iri);
            queue.push_back(n);
        }
    }
    return out;
}

std::size_t path_score(const KnowledgeGraph& g, std::string_view a, std::string_view b, int cutoff) {
    auto ia = require(g, a);
    auto ib = require(g, b);
    auto counts = count_simple_paths(g, ia, cutoff);
    auto it = counts.find(ib);
    return it == counts.end() ? 0 : it->second;
}

QueryResult semantic_query(const KnowledgeGraph& g, const QuerySpec& spec) {
    if (spec.k == 0)
        throw QueryError("k must be at least 1");
    if (spec.sources.empty())
        throw QueryError("at least one source entity is required");

    QueryResult result;
    std::vector<Index> sources;
    for (const auto& iri : spec.sources) {
        auto idx = require(g, iri);
        if (std::find(sources.begin(), sources.end(), idx) == sources.end()) {
            sources.push_back(idx);
            result.sources.push_back(iri);
        }
    }

    std::unordered_map<Index, std::size_t> scores;
    std::vector<std::pair<Index, Index>> candidate_edges;
    for (auto src : sources) {
        int d = ontology_distance(g.entity(src).type, spec.target_type);
        for (auto [target, count] : count_simple_paths(g, src, d)) {
            if (g.entity(target).type != spec.target_type)
                continue;
            scores[target] += count;
            candidate_edges.push_back({src, target});
        }
    }

    std::vector<ScoredEntity> ranked;
    ranked.reserve(scores.size());
    for (auto [idx, score] : scores)
        ranked.push_back({g.entity(idx).iri, score});
    std::sort(ranked.begin(), ranked.end(), [](const ScoredEntity& a, const ScoredEntity& b) {
        if (a.score != b.score)
            return a.score > b.score;
        return a.iri < b.iri;
    });
    if (ranked.size() > spec.k)
        ranked.resize(spec.k);
    result.targets = std::move(ranked);

    std::unordered_set<std::string> kept;
    for (const auto& t : result.targets)
        kept.insert(t.iri);
    for (auto [s, t] : candidate_edges) {
        const auto& ti = g.entity(t).iri;
        if (kept.count(ti))
            result.cross_edges.push_back({g.entity(s).iri, ti});
    }
    sort_unique(result.cross_edges);
    return result;
}

std::vector<Edge> internal_edges(const KnowledgeGraph& g, std::span<const std::string> targets) {
    std::set<Index> members;
    for (const auto& iri : targets)
        members.insert(require(g, iri));

    std::vector<Edge> out;
    std::map<Index, std::set<Index>> attached;  // paper -> member non-paper entities
    for (auto m : members) {
        const auto& e = g.entity(m);
        for (const auto& arc : g.arcs(m)) {
            if (e.type == EntityType::Paper) {
                if (arc.predicate == Predicate::cites && arc.outgoing && arc.other != m && members.count(arc.other))
                    out.push_back({e.iri, g.entity(arc.other).iri});
            } else if (!arc.outgoing) {
                attached[arc.other].insert(m);
            }
        }
    }
    for (const auto& [paper, set] : attached) {
        std::vector<Index> v(set.begin(), set.end());
        for (std::size_t i = 0; i < v.size(); ++i) {
            for (std::size_t j = i + 1; j < v.size(); ++j) {
                const auto& a = g.entity(v[i]);
                const auto& b = g.entity(v[j]);
                if (a.type != b.type)
                    continue;
                out.push_back(a.iri < b.iri ? Edge{a.iri, b.iri} : Edge{b.iri, a.iri});
            }
        }
    }
    sort_unique(out);
    return out;
}

Subgraph normalized(Subgraph s) {
    sort_unique(s.nodes);
    sort_unique(s.edges);
    sort_unique(s.highlighted);
    return s;
}

Subgraph cross_graph(const QueryResult& r) {
    Subgraph s;
    s.nodes = r.sources;
    for (const auto& t : r.targets)
        s.nodes.push_back(t.iri);
    s.edges = r.cross_edges;
    return normalized(std::move(s));
}

Subgraph internal_graph(const KnowledgeGraph& g, const QueryResult& r) {
    Subgraph s;
    for (const auto& t : r.targets)
        s.nodes.push_back(t.iri);
    s.edges = r.internal_edges ? *r.internal_edges : internal_edges(g, s.nodes);
    return normalized(std::move(s));
}

ComparisonResult compare_graphs(std::span<const Subgraph> graphs) {
    if (graphs.size() < 2)
        throw QueryError("comparison needs at least two graphs, got " + std::to_string(graphs.size()));
    ComparisonResult out;
    std::set<std::string> common(graphs[0].nodes.begin(), graphs[0].nodes.end());
    for (const auto& g : graphs) {
        out.merged.nodes.insert(out.merged.nodes.end(), g.nodes.begin(), g.nodes.end());
        out.merged.edges.insert(out.merged.edges.end(), g.edges.begin(), g.edges.end());
        std::set<std::string> here(g.nodes.begin(), g.nodes.end());
        std::set<std::string> next;
        std::set_intersection(common.begin(), common.end(), here.begin(), here.end(),
                              std::inserter(next, next.end()));
        common = std::move(next);
    }
    out.common.assign(common.begin(), common.end());
    out.merged.highlighted = out.common;
    out.merged = normalized(std::move(out.merged));
    return out;
}

ComparisonResult compare_graphs(std::span<const QueryResult> results) {
    std::vector<Subgraph> graphs;
    for (const auto& r : results)
        graphs.push_back(cross_graph(r));
    return compare_graphs(std::span<const Subgraph>(graphs));
}

std::vector<CooccurrenceLink> cooccurrence_links(const KnowledgeGraph& g, std::span<const std::string> concepts) {
    std::set<Index> members;
    for (const auto& iri : concepts) {
        auto idx = require(g, iri);
        if (g.entity(idx).type != EntityType::Concept)
            throw QueryError(iri + " is not a Concept");
        members.insert(idx);
    }
    std::map<Index, std::set<Index>> by_paper;
    for (auto c : members)
        for (const auto& arc : g.arcs(c))
            if (!arc.outgoing && predicate_role(arc.predicate))
                by_paper[arc.other].insert(c);

    std::map<std::pair<std::string, std::string>, std::size_t> weights;
    for (const auto& [paper, set] : by_paper) {
        std::vector<Index> v(set.begin(), set.end());
        for (std::size_t i = 0; i < v.size(); ++i) {
            for (std::size_t j = i + 1; j < v.size(); ++j) {
                auto a = g.entity(v[i]).iri;
                auto b = g.entity(v[j]).iri;
                if (b < a)
                    std::swap(a, b);
                ++weights[{a, b}];
            }
        }
    }
    std::vector<CooccurrenceLink> out;
    for (const auto& [pair, w] : weights)
        out.push_back({pair.first, pair.second, w});
    return out;
}

json to_json(const QueryResult& r) {
    json targets = json::array();
    for (const auto& t : r.targets)
        targets.push_back({{"iri", t.iri}, {"score", t.score}});
    json out{{"sources", r.sources}, {"targets", targets}, {"cross_edges", r.cross_edges}};
    if (r.internal_edges)
        out["internal_edges"] = *r.internal_edges;
    return out;
}

json to_json(const Subgraph& s) {
    return {{"nodes", s.nodes}, {"edges", s.edges}, {"highlighted", s.highlighted}};
}

}  // namespace skg::query
