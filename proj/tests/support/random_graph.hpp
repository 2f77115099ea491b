#pragma once

#include "skg/graph.hpp"

#include <random>
#include <string>
#include <vector>

namespace skg::fixtures {

struct RawGraph {
    std::vector<Entity> entities;
    std::vector<Triple> triples;  // may contain duplicates and self-citations
};

inline std::string random_text(std::mt19937& rng, bool tricky) {
    static const std::vector<std::string> words = {"topic", "model", "graph", "visual", "text", "mining",
                                                   "data", "flow", "network", "analysis", "cloud", "word"};
    static const std::vector<std::string> odd = {"\"quoted\"", "back\\slash", "line\nbreak", "tab\there",
                                                 "caf\xC3\xA9", "na\xC3\xAFve", "50%", "a;b,c.", "<angle>", "#hash"};
    std::uniform_int_distribution<int> count(1, 4);
    std::string out;
    int n = count(rng);
    for (int i = 0; i < n; ++i) {
        if (i)
            out += ' ';
        if (tricky && std::bernoulli_distribution(0.3)(rng))
            out += odd[std::uniform_int_distribution<std::size_t>(0, odd.size() - 1)(rng)];
        else
            out += words[std::uniform_int_distribution<std::size_t>(0, words.size() - 1)(rng)];
    }
    return out;
}

// Ontology-conformant graph with at most max_nodes entities, at least one
// paper, parallel predicates, duplicate triples and the odd self-citation.
inline RawGraph random_raw_graph(std::mt19937& rng, std::size_t max_nodes, bool tricky_literals = false) {
    std::uniform_int_distribution<std::size_t> size_dist(2, max_nodes);
    std::size_t n = size_dist(rng);
    std::discrete_distribution<int> type_dist({35, 30, 20, 7, 8});

    RawGraph g;
    std::vector<std::size_t> by_type[5];
    for (std::size_t i = 0; i < n; ++i) {
        auto t = i == 0 ? EntityType::Paper : kEntityTypes[type_dist(rng)];
        Entity e;
        e.type = t;
        e.iri = "http://t.example/" + std::string(to_string(t)) + "/" + std::to_string(i);
        e.attributes[std::string(name_attribute(t))] = random_text(rng, tricky_literals);
        if (t == EntityType::Paper) {
            if (std::bernoulli_distribution(0.5)(rng))
                e.attributes["year"] = std::to_string(std::uniform_int_distribution<int>(1990, 2022)(rng));
            if (std::bernoulli_distribution(0.5)(rng))
                e.attributes["sourceId"] = "s" + std::to_string(i);
        }
        if (t == EntityType::Concept && std::bernoulli_distribution(0.3)(rng))
            e.attributes["dbpediaUrl"] = "http://dbpedia.org/resource/R" + std::to_string(i);
        by_type[static_cast<int>(t)].push_back(i);
        g.entities.push_back(std::move(e));
    }

    const auto& papers = by_type[0];
    std::uniform_int_distribution<int> degree(0, 4);
    for (auto p : papers) {
        int m = degree(rng);
        for (int k = 0; k < m; ++k) {
            auto pred = kPredicates[std::uniform_int_distribution<std::size_t>(0, kPredicates.size() - 1)(rng)];
            const auto& pool = by_type[static_cast<int>(signature(pred).range)];
            if (pool.empty())
                continue;
            auto o = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
            if (pred == Predicate::cites && o == p && std::bernoulli_distribution(0.7)(rng))
                continue;
            Triple t{g.entities[p].iri, pred, g.entities[o].iri};
            g.triples.push_back(t);
            if (std::bernoulli_distribution(0.1)(rng))
                g.triples.push_back(t);
        }
    }
    return g;
}

inline KnowledgeGraph to_graph(const RawGraph& raw) {
    return KnowledgeGraph(raw.entities, raw.triples);
}

}  // namespace skg::fixtures
