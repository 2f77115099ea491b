#pragma once

// Brute-force reference for multi-hop semantic queries. Works from raw
// entity/triple lists only: an adjacency matrix, a hand-written type
// distance table and exhaustive enumeration of vertex sequences.

#include "skg/graph.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace skg::oracle {

// Rows/columns: Paper, Concept, Author, Journal, Conference. Every
// predicate touches Paper, so Paper-X is one hop and X-Y two; Paper-Paper
// is one hop through cites, any other same-type pair two.
inline constexpr int kTypeDistance[5][5] = {
    {1, 1, 1, 1, 1},
    {1, 2, 2, 2, 2},
    {1, 2, 2, 2, 2},
    {1, 2, 2, 2, 2},
    {1, 2, 2, 2, 2},
};

struct Result {
    std::vector<std::pair<std::string, std::size_t>> targets;
    std::vector<std::pair<std::string, std::string>> cross_edges;
};

class PathOracle {
public:
    PathOracle(const std::vector<Entity>& entities, const std::vector<Triple>& triples) {
        for (const auto& e : entities) {
            index_[e.iri] = iris_.size();
            iris_.push_back(e.iri);
            types_.push_back(static_cast<int>(e.type));
        }
        adj_.assign(iris_.size(), std::vector<bool>(iris_.size(), false));
        for (const auto& t : triples) {
            auto a = index_.at(t.s), b = index_.at(t.o);
            if (a != b)
                adj_[a][b] = adj_[b][a] = true;
        }
    }

    int distance(const std::string& a, EntityType b) const {
        return kTypeDistance[types_[index_.at(a)]][static_cast<int>(b)];
    }

    // Vertex sequences s = v0, v1, ..., vL = t with 1 <= L <= max_len, all
    // vertices distinct, consecutive vertices adjacent.
    std::size_t count_paths(std::size_t s, std::size_t t, int max_len) const {
        if (s == t)
            return 0;
        std::size_t n = iris_.size();
        std::size_t total = 0;
        for (int len = 1; len <= max_len; ++len) {
            std::size_t inner = static_cast<std::size_t>(len - 1);
            std::vector<std::size_t> mid(inner, 0);
            while (true) {
                std::vector<std::size_t> seq{s};
                seq.insert(seq.end(), mid.begin(), mid.end());
                seq.push_back(t);
                bool ok = true;
                for (std::size_t i = 0; ok && i < seq.size(); ++i)
                    for (std::size_t j = i + 1; ok && j < seq.size(); ++j)
                        if (seq[i] == seq[j])
                            ok = false;
                for (std::size_t i = 0; ok && i + 1 < seq.size(); ++i)
                    if (!adj_[seq[i]][seq[i + 1]])
                        ok = false;
                if (ok)
                    ++total;
                std::size_t pos = 0;
                while (pos < inner && ++mid[pos] == n)
                    mid[pos++] = 0;
                if (pos == inner)
                    break;
            }
        }
        return total;
    }

    std::size_t count_paths(const std::string& a, const std::string& b, int max_len) const {
        return count_paths(index_.at(a), index_.at(b), max_len);
    }

    Result query(const std::vector<std::string>& sources, EntityType target, std::size_t k) const {
        std::vector<std::size_t> srcs;
        for (const auto& s : sources) {
            auto i = index_.at(s);
            if (std::find(srcs.begin(), srcs.end(), i) == srcs.end())
                srcs.push_back(i);
        }
        std::map<std::size_t, std::size_t> score;
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (auto s : srcs) {
            int d = kTypeDistance[types_[s]][static_cast<int>(target)];
            for (std::size_t t = 0; t < iris_.size(); ++t) {
                if (types_[t] != static_cast<int>(target))
                    continue;
                auto c = count_paths(s, t, d);
                if (c == 0)
                    continue;
                score[t] += c;
                pairs.emplace_back(s, t);
            }
        }
        Result r;
        for (auto [t, c] : score)
            r.targets.emplace_back(iris_[t], c);
        std::stable_sort(r.targets.begin(), r.targets.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
        if (r.targets.size() > k)
            r.targets.resize(k);
        for (auto [s, t] : pairs) {
            bool kept = std::any_of(r.targets.begin(), r.targets.end(),
                                    [&](const auto& x) { return x.first == iris_[t]; });
            if (kept)
                r.cross_edges.emplace_back(iris_[s], iris_[t]);
        }
        std::sort(r.cross_edges.begin(), r.cross_edges.end());
        r.cross_edges.erase(std::unique(r.cross_edges.begin(), r.cross_edges.end()), r.cross_edges.end());
        return r;
    }

    // Plain BFS over the adjacency matrix.
    std::vector<std::string> reachable(const std::string& from, int cutoff) const {
        std::vector<int> dist(iris_.size(), -1);
        auto s = index_.at(from);
        dist[s] = 0;
        std::vector<std::size_t> frontier{s};
        for (int step = 1; step <= cutoff; ++step) {
            std::vector<std::size_t> next;
            for (auto u : frontier)
                for (std::size_t v = 0; v < iris_.size(); ++v)
                    if (adj_[u][v] && dist[v] < 0) {
                        dist[v] = step;
                        next.push_back(v);
                    }
            frontier = std::move(next);
        }
        std::vector<std::string> out;
        for (std::size_t v = 0; v < iris_.size(); ++v)
            if (v != s && dist[v] > 0)
                out.push_back(iris_[v]);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::map<std::string, std::size_t> index_;
    std::vector<std::string> iris_;
    std::vector<int> types_;
    std::vector<std::vector<bool>> adj_;
};

}  // namespace skg::oracle
