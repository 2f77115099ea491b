#include "skg/dataflow.hpp"

#include "skg/text.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <set>

namespace skg::dataflow {

using nlohmann::json;

std::string_view to_string(PortType t) {
    switch (t) {
    case PortType::EntityList: return "EntityList";
    case PortType::Subgraph: return "Subgraph";
    case PortType::WebUri: return "WebUri";
    case PortType::TableRows: return "TableRows";
    case PortType::VizData: return "VizData";
    }
    return "?";
}

std::string_view to_string(ComponentKind k) {
    switch (k) {
    case ComponentKind::querier: return "querier";
    case ComponentKind::expander: return "expander";
    case ComponentKind::comparer: return "comparer";
    case ComponentKind::node_visualizer: return "node_visualizer";
    case ComponentKind::table_viewer: return "table_viewer";
    case ComponentKind::node_viewer: return "node_viewer";
    }
    return "?";
}

std::string_view to_string(ExpanderOutput m) {
    switch (m) {
    case ExpanderOutput::entities: return "entities";
    case ExpanderOutput::cross_graph: return "cross_graph";
    case ExpanderOutput::internal_graph: return "internal_graph";
    case ExpanderOutput::web_uri: return "web_uri";
    }
    return "?";
}

std::string_view to_string(Chart c) {
    return c == Chart::node_link ? "node_link" : "sankey";
}

std::string_view to_string(Status s) {
    switch (s) {
    case Status::ok: return "ok";
    case Status::error: return "error";
    case Status::skipped: return "skipped";
    }
    return "?";
}

bool is_viewer(ComponentKind k) {
    return k == ComponentKind::node_visualizer || k == ComponentKind::table_viewer ||
           k == ComponentKind::node_viewer;
}

namespace {

constexpr ComponentKind kKinds[] = {ComponentKind::querier,         ComponentKind::expander,
                                    ComponentKind::comparer,        ComponentKind::node_visualizer,
                                    ComponentKind::table_viewer,    ComponentKind::node_viewer};

std::optional<ComponentKind> parse_kind(std::string_view s) {
    for (auto k : kKinds)
        if (s == to_string(k))
            return k;
    return std::nullopt;
}

template <class Enum, std::size_t N>
Enum parse_enum(const json& v, const char* key, const Enum (&values)[N]) {
    if (!v.is_string())
        throw PipelineFormatError(std::string("'") + key + "' must be a string");
    for (auto e : values)
        if (v.get<std::string>() == to_string(e))
            return e;
    throw PipelineFormatError(std::string("unknown ") + key + " '" + v.get<std::string>() + "'");
}

std::size_t positive(const json& params, const char* key, std::size_t fallback) {
    auto it = params.find(key);
    if (it == params.end() || it->is_null())
        return fallback;
    if (!it->is_number_integer() || it->get<long long>() < 1)
        throw PipelineFormatError(std::string("'") + key + "' must be a positive integer");
    return static_cast<std::size_t>(it->get<long long>());
}

EntityType etype_param(const json& params, const char* key, std::optional<EntityType> fallback) {
    auto it = params.find(key);
    if (it == params.end() || it->is_null()) {
        if (fallback)
            return *fallback;
        throw PipelineFormatError(std::string("'") + key + "' is required");
    }
    if (!it->is_string())
        throw PipelineFormatError(std::string("'") + key + "' must be an entity type name");
    auto t = parse_entity_type(it->get<std::string>());
    if (!t)
        throw PipelineFormatError("unknown entity type '" + it->get<std::string>() + "'");
    return *t;
}

std::pair<std::string, std::string> split_endpoint(const std::string& s) {
    auto dot = s.find('.');
    if (dot == std::string::npos)
        return {s, {}};
    return {s.substr(0, dot), s.substr(dot + 1)};
}

const Port* find_port(const std::vector<Port>& ports, const std::string& name) {
    for (const auto& p : ports)
        if (p.name == name)
            return &p;
    return nullptr;
}

}  // namespace

ComponentParams parse_params(const ComponentSpec& spec) {
    const auto& p = spec.params;
    if (!p.is_null() && !p.is_object())
        throw PipelineFormatError("params must be an object");
    const json params = p.is_null() ? json::object() : p;

    switch (spec.kind) {
    case ComponentKind::querier: {
        QuerierParams q;
        auto it = params.find("terms");
        if (it == params.end())
            throw PipelineFormatError("querier needs 'terms'");
        if (it->is_string()) {
            q.terms = query::split_terms(it->get<std::string>());
        } else if (it->is_array()) {
            for (const auto& t : *it) {
                if (!t.is_string())
                    throw PipelineFormatError("'terms' must contain strings");
                for (auto& part : query::split_terms(t.get<std::string>()))
                    q.terms.push_back(std::move(part));
            }
        } else {
            throw PipelineFormatError("'terms' must be a string or an array of strings");
        }
        if (q.terms.empty())
            throw PipelineFormatError("querier 'terms' is empty");
        q.etype = etype_param(params, "etype", EntityType::Concept);
        q.limit = positive(params, "limit", q.limit);
        return q;
    }
    case ComponentKind::expander: {
        ExpanderParams e;
        e.target_type = etype_param(params, "target_type", std::nullopt);
        e.k = positive(params, "k", e.k);
        if (auto it = params.find("output_mode"); it != params.end() && !it->is_null()) {
            static constexpr ExpanderOutput modes[] = {ExpanderOutput::entities, ExpanderOutput::cross_graph,
                                                       ExpanderOutput::internal_graph, ExpanderOutput::web_uri};
            e.output_mode = parse_enum(*it, "output_mode", modes);
        }
        if (auto it = params.find("select"); it != params.end() && !it->is_null()) {
            if (!it->is_string())
                throw PipelineFormatError("'select' must be an entity iri");
            e.select = it->get<std::string>();
        }
        if (e.output_mode == ExpanderOutput::web_uri && e.target_type != EntityType::Concept)
            throw PipelineFormatError("web_uri output requires target_type Concept");
        return e;
    }
    case ComponentKind::comparer: {
        ComparerParams c;
        c.inputs = positive(params, "inputs", c.inputs);
        if (c.inputs < 2)
            throw PipelineFormatError("comparer needs at least 2 inputs");
        return c;
    }
    case ComponentKind::node_visualizer: {
        NodeVisualizerParams v;
        if (auto it = params.find("chart"); it != params.end() && !it->is_null()) {
            static constexpr Chart charts[] = {Chart::node_link, Chart::sankey};
            v.chart = parse_enum(*it, "chart", charts);
        }
        return v;
    }
    case ComponentKind::table_viewer: {
        TableViewerParams t;
        if (auto it = params.find("input"); it != params.end() && !it->is_null()) {
            static constexpr PortType inputs[] = {PortType::EntityList, PortType::Subgraph};
            t.input = parse_enum(*it, "input", inputs);
        }
        return t;
    }
    case ComponentKind::node_viewer:
        return NodeViewerParams{};
    }
    throw PipelineFormatError("unknown component kind");
}

namespace {

ComponentParams params_or_default(const ComponentSpec& spec) {
    try {
        return parse_params(spec);
    } catch (const PipelineFormatError&) {
        switch (spec.kind) {
        case ComponentKind::querier: return QuerierParams{};
        case ComponentKind::expander: return ExpanderParams{};
        case ComponentKind::comparer: return ComparerParams{};
        case ComponentKind::node_visualizer: return NodeVisualizerParams{};
        case ComponentKind::table_viewer: return TableViewerParams{};
        case ComponentKind::node_viewer: return NodeViewerParams{};
        }
    }
    return NodeViewerParams{};
}

PortType expander_output_type(ExpanderOutput m) {
    switch (m) {
    case ExpanderOutput::entities: return PortType::EntityList;
    case ExpanderOutput::cross_graph:
    case ExpanderOutput::internal_graph: return PortType::Subgraph;
    case ExpanderOutput::web_uri: return PortType::WebUri;
    }
    return PortType::EntityList;
}

}  // namespace

std::vector<Port> input_ports(const ComponentSpec& spec) {
    auto params = params_or_default(spec);
    switch (spec.kind) {
    case ComponentKind::querier: return {};
    case ComponentKind::expander: return {{"sources", PortType::EntityList}};
    case ComponentKind::comparer: {
        std::vector<Port> ports;
        for (std::size_t i = 0; i < std::get<ComparerParams>(params).inputs; ++i)
            ports.push_back({"in" + std::to_string(i), PortType::Subgraph});
        return ports;
    }
    case ComponentKind::node_visualizer: return {{"graph", PortType::Subgraph}};
    case ComponentKind::table_viewer: return {{"data", std::get<TableViewerParams>(params).input}};
    case ComponentKind::node_viewer: return {{"uri", PortType::WebUri}};
    }
    return {};
}

std::vector<Port> output_ports(const ComponentSpec& spec) {
    auto params = params_or_default(spec);
    switch (spec.kind) {
    case ComponentKind::querier: return {{"entities", PortType::EntityList}};
    case ComponentKind::expander:
        return {{"out", expander_output_type(std::get<ExpanderParams>(params).output_mode)}};
    case ComponentKind::comparer: return {{"merged", PortType::Subgraph}};
    default: return {};
    }
}

Pipeline pipeline_from_json(const json& doc) {
    if (!doc.is_object())
        throw PipelineFormatError("pipeline document must be a JSON object");
    Pipeline p;
    if (auto cs = doc.find("components"); cs != doc.end() && !cs->is_null()) {
        if (!cs->is_object())
            throw PipelineFormatError("'components' must be an object keyed by component id");
        for (const auto& [id, c] : cs->items()) {
            if (id.empty() || id.find('.') != std::string::npos)
                throw PipelineFormatError("component id '" + id + "' must be non-empty and contain no '.'");
            if (!c.is_object() || !c.contains("kind") || !c["kind"].is_string())
                throw PipelineFormatError("component '" + id + "' needs a string 'kind'");
            auto kind = parse_kind(c["kind"].get<std::string>());
            if (!kind)
                throw PipelineFormatError("component '" + id + "' has unknown kind '" +
                                          c["kind"].get<std::string>() + "'");
            ComponentSpec spec{*kind, c.value("params", json::object())};
            p.components.emplace(id, std::move(spec));
        }
    }
    if (auto ws = doc.find("wires"); ws != doc.end() && !ws->is_null()) {
        if (!ws->is_array())
            throw PipelineFormatError("'wires' must be an array");
        for (const auto& w : *ws) {
            if (!w.is_object() || !w.contains("from") || !w.contains("to") || !w["from"].is_string() ||
                !w["to"].is_string())
                throw PipelineFormatError("each wire needs string 'from' and 'to'");
            auto [fc, fp] = split_endpoint(w["from"].get<std::string>());
            auto [tc, tp] = split_endpoint(w["to"].get<std::string>());
            if (auto it = p.components.find(fc); fp.empty() && it != p.components.end()) {
                auto outs = output_ports(it->second);
                if (outs.size() == 1)
                    fp = outs[0].name;
            }
            if (auto it = p.components.find(tc); tp.empty() && it != p.components.end()) {
                auto ins = input_ports(it->second);
                if (ins.size() == 1)
                    tp = ins[0].name;
            }
            p.wires.push_back({{fc, fp}, {tc, tp}});
        }
    }
    return p;
}

json pipeline_to_json(const Pipeline& p) {
    json components = json::object();
    for (const auto& [id, c] : p.components)
        components[id] = {{"kind", to_string(c.kind)}, {"params", c.params.is_null() ? json::object() : c.params}};
    json wires = json::array();
    for (const auto& w : p.wires)
        wires.push_back({{"from", w.from.component + "." + w.from.port}, {"to", w.to.component + "." + w.to.port}});
    return {{"components", components}, {"wires", wires}};
}

std::vector<Violation> validate(const Pipeline& p) {
    std::vector<Violation> out;

    for (const auto& [id, c] : p.components) {
        try {
            parse_params(c);
        } catch (const PipelineFormatError& e) {
            out.push_back({"bad_params", "component '" + id + "': " + e.what(), {id}});
        }
    }

    std::map<std::string, std::set<std::string>> successors;
    std::map<std::pair<std::string, std::string>, std::size_t> wired_inputs;
    for (const auto& w : p.wires) {
        auto from = p.components.find(w.from.component);
        auto to = p.components.find(w.to.component);
        bool ok = true;
        for (const auto* ep : {&w.from, &w.to}) {
            if (!p.components.count(ep->component)) {
                out.push_back({"unknown_component", "wire references unknown component '" + ep->component + "'",
                               {ep->component}});
                ok = false;
            }
        }
        if (!ok)
            continue;

        auto outs = output_ports(from->second);
        auto ins = input_ports(to->second);
        const Port* src = find_port(outs, w.from.port);
        const Port* dst = find_port(ins, w.to.port);
        if (!src) {
            out.push_back({"unknown_port",
                           "component '" + w.from.component + "' (" + std::string(to_string(from->second.kind)) +
                               ") has no output port '" + w.from.port + "'",
                           {w.from.component}});
        }
        if (!dst) {
            out.push_back({"unknown_port",
                           "component '" + w.to.component + "' (" + std::string(to_string(to->second.kind)) +
                               ") has no input port '" + w.to.port + "'",
                           {w.to.component}});
        }
        successors[w.from.component].insert(w.to.component);
        if (!src || !dst)
            continue;
        if (src->type != dst->type) {
            out.push_back({"type_mismatch",
                           "wire " + w.from.component + "." + w.from.port + " (" + std::string(to_string(src->type)) +
                               ") -> " + w.to.component + "." + w.to.port + " (" + std::string(to_string(dst->type)) +
                               ")",
                           {w.from.component, w.to.component}});
        }
        if (++wired_inputs[{w.to.component, w.to.port}] == 2) {
            out.push_back({"duplicate_input",
                           "input port " + w.to.component + "." + w.to.port + " is wired more than once",
                           {w.to.component}});
        }
    }

    for (const auto& [id, c] : p.components) {
        for (const auto& port : input_ports(c)) {
            if (!wired_inputs.count({id, port.name}))
                out.push_back({"unwired_input", "input port " + id + "." + port.name + " is not wired", {id}});
        }
    }

    // Strongly connected components (Tarjan); every non-trivial one is a cycle.
    std::map<std::string, int> index, low;
    std::set<std::string> on_stack;
    std::vector<std::string> stack;
    int counter = 0;
    std::function<void(const std::string&)> strong = [&](const std::string& v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack.insert(v);
        for (const auto& w : successors[v]) {
            if (!index.count(w)) {
                strong(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack.count(w)) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] != index[v])
            return;
        std::vector<std::string> scc;
        while (true) {
            auto w = stack.back();
            stack.pop_back();
            on_stack.erase(w);
            scc.push_back(w);
            if (w == v)
                break;
        }
        bool self_loop = successors[v].count(v) > 0;
        if (scc.size() > 1 || self_loop) {
            std::sort(scc.begin(), scc.end());
            std::string names;
            for (const auto& n : scc)
                names += (names.empty() ? "" : ", ") + n;
            out.push_back({"cycle", "pipeline contains a cycle through " + names, scc});
        }
    };
    for (const auto& [id, c] : p.components)
        if (!index.count(id))
            strong(id);

    return out;
}

json violations_to_json(const std::vector<Violation>& v) {
    json arr = json::array();
    for (const auto& x : v)
        arr.push_back({{"code", x.code}, {"message", x.message}, {"components", x.components}});
    return arr;
}

PortType payload_type(const Payload& p) {
    return std::visit(
        [](const auto& v) -> PortType {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, EntityList>)
                return PortType::EntityList;
            else if constexpr (std::is_same_v<T, Subgraph>)
                return PortType::Subgraph;
            else if constexpr (std::is_same_v<T, WebUri>)
                return PortType::WebUri;
            else if constexpr (std::is_same_v<T, TableRows>)
                return PortType::TableRows;
            else
                return PortType::VizData;
        },
        p);
}

json payload_to_json(const Payload& p) {
    json out{{"type", to_string(payload_type(p))}};
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, EntityList>) {
                json entities = json::array();
                for (std::size_t i = 0; i < v.iris.size(); ++i) {
                    json e{{"iri", v.iris[i]}};
                    if (i < v.scores.size())
                        e["score"] = v.scores[i];
                    entities.push_back(e);
                }
                out["entities"] = entities;
            } else if constexpr (std::is_same_v<T, Subgraph>) {
                out.update(query::to_json(v));
            } else if constexpr (std::is_same_v<T, WebUri>) {
                out["iri"] = v.iri ? json(*v.iri) : json(nullptr);
                out["url"] = v.url ? json(*v.url) : json(nullptr);
            } else if constexpr (std::is_same_v<T, TableRows>) {
                out["columns"] = v.columns;
                out["rows"] = v.rows;
            } else {
                out["chart"] = to_string(v.chart);
                json nodes = json::array();
                for (const auto& n : v.nodes) {
                    json node{{"iri", n.iri},
                              {"label", n.label},
                              {"entity_type", skg::to_string(n.type)},
                              {"degree", n.degree},
                              {"highlighted", n.highlighted}};
                    if (n.group)
                        node["group"] = skg::to_string(*n.group);
                    nodes.push_back(node);
                }
                json links = json::array();
                for (const auto& l : v.links)
                    links.push_back({{"source", l.source}, {"target", l.target}, {"weight", l.weight}});
                out["nodes"] = nodes;
                out["links"] = links;
            }
        },
        p);
    return out;
}

InvalidPipeline::InvalidPipeline(std::vector<Violation> v)
    : std::runtime_error("pipeline failed validation with " + std::to_string(v.size()) + " violation(s)"),
      violations(std::move(v)) {}

ConceptLabel sankey_group(const KnowledgeGraph& g, KnowledgeGraph::Index concept_index) {
    std::map<ConceptLabel, std::size_t> local;
    for (const auto& arc : g.arcs(concept_index))
        if (auto role = predicate_role(arc.predicate))
            ++local[*role];
    auto global = g.stats().relation_counts;

    ConceptLabel best = kConceptLabels[0];
    bool first = true;
    for (auto l : kConceptLabels) {
        auto key = std::pair(local[l], global[role_predicate(l)]);
        auto best_key = std::pair(local[best], global[role_predicate(best)]);
        if (first || key > best_key) {
            best = l;
            first = false;
        }
    }
    return best;
}

TableRows entity_table(const KnowledgeGraph& g, const std::vector<std::string>& iris) {
    std::set<std::string> keys;
    std::vector<const Entity*> entities;
    for (const auto& iri : iris) {
        const auto* e = g.find(iri);
        if (!e)
            throw query::QueryError("unknown entity " + iri);
        entities.push_back(e);
        for (const auto& [k, v] : e->attributes)
            keys.insert(k);
    }
    TableRows t;
    t.columns = {"iri", "type"};
    t.columns.insert(t.columns.end(), keys.begin(), keys.end());
    for (const auto* e : entities) {
        std::vector<std::string> row{e->iri, std::string(to_string(e->type))};
        for (const auto& k : keys) {
            auto* v = e->attribute(k);
            row.push_back(v ? *v : std::string());
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

namespace {

struct ComponentRunner {
    const KnowledgeGraph& g;

    Payload run(const ComponentSpec& spec, const std::map<std::string, const Payload*>& inputs) const {
        auto params = parse_params(spec);
        switch (spec.kind) {
        case ComponentKind::querier: {
            const auto& q = std::get<QuerierParams>(params);
            return EntityList{query::fuzzy_query(g, q.terms, q.etype, q.limit), {}};
        }
        case ComponentKind::expander:
            return expand(std::get<ExpanderParams>(params), std::get<EntityList>(*inputs.at("sources")));
        case ComponentKind::comparer: {
            std::vector<Subgraph> graphs;
            for (const auto& [port, payload] : inputs)
                graphs.push_back(std::get<Subgraph>(*payload));
            return query::compare_graphs(std::span<const Subgraph>(graphs)).merged;
        }
        case ComponentKind::node_visualizer:
            return visualize(std::get<NodeVisualizerParams>(params).chart, std::get<Subgraph>(*inputs.at("graph")));
        case ComponentKind::table_viewer: {
            const auto& in = *inputs.at("data");
            if (auto* list = std::get_if<EntityList>(&in))
                return entity_table(g, list->iris);
            return entity_table(g, std::get<Subgraph>(in).nodes);
        }
        case ComponentKind::node_viewer:
            return std::get<WebUri>(*inputs.at("uri"));
        }
        throw std::logic_error("unhandled component kind");
    }

    Payload expand(const ExpanderParams& e, const EntityList& sources) const {
        query::QueryResult r;
        if (!sources.iris.empty())
            r = query::semantic_query(g, {sources.iris, e.target_type, e.k});

        switch (e.output_mode) {
        case ExpanderOutput::entities: {
            EntityList out;
            for (const auto& t : r.targets) {
                out.iris.push_back(t.iri);
                out.scores.push_back(t.score);
            }
            return out;
        }
        case ExpanderOutput::cross_graph: return query::cross_graph(r);
        case ExpanderOutput::internal_graph: return query::internal_graph(g, r);
        case ExpanderOutput::web_uri: {
            WebUri out;
            for (const auto& t : r.targets) {
                if (e.select && t.iri != *e.select)
                    continue;
                const auto* url = g.find(t.iri)->attribute("dbpediaUrl");
                if (!url && !e.select)
                    continue;
                out.iri = t.iri;
                if (url)
                    out.url = *url;
                break;
            }
            if (e.select && !out.iri)
                throw query::QueryError("selected concept " + *e.select + " is not among the expanded targets");
            return out;
        }
        }
        throw std::logic_error("unhandled output mode");
    }

    Payload visualize(Chart chart, const Subgraph& sg) const {
        VizData viz;
        viz.chart = chart;
        std::set<std::string> highlighted(sg.highlighted.begin(), sg.highlighted.end());

        if (chart == Chart::node_link) {
            std::map<std::string, std::size_t> degree;
            for (const auto& [a, b] : sg.edges) {
                ++degree[a];
                ++degree[b];
            }
            for (const auto& iri : sg.nodes) {
                const auto* e = g.find(iri);
                if (!e)
                    throw query::QueryError("unknown entity " + iri);
                viz.nodes.push_back({iri, e->display_name(), e->type, degree[iri], std::nullopt, highlighted.count(iri) > 0});
            }
            for (const auto& [a, b] : sg.edges)
                viz.links.push_back({a, b, 1});
            return viz;
        }

        std::vector<std::string> concepts;
        for (const auto& iri : sg.nodes) {
            auto idx = g.index_of(iri);
            if (!idx)
                throw query::QueryError("unknown entity " + iri);
            if (g.entity(*idx).type == EntityType::Concept)
                concepts.push_back(iri);
        }
        auto links = query::cooccurrence_links(g, concepts);
        std::map<std::string, std::size_t> degree;
        for (const auto& l : links) {
            degree[l.concept_a] += l.weight;
            degree[l.concept_b] += l.weight;
            viz.links.push_back({l.concept_a, l.concept_b, l.weight});
        }
        for (const auto& iri : concepts) {
            auto idx = *g.index_of(iri);
            const auto& e = g.entity(idx);
            viz.nodes.push_back({iri, e.display_name(), e.type, degree[iri], sankey_group(g, idx), highlighted.count(iri) > 0});
        }
        return viz;
    }
};

}  // namespace

ExecutionTrace execute(const Pipeline& p, const KnowledgeGraph& g) {
    auto violations = validate(p);
    if (!violations.empty())
        throw InvalidPipeline(std::move(violations));

    std::map<std::string, std::size_t> indegree;
    std::map<std::string, std::vector<const Wire*>> incoming;
    std::map<std::string, std::vector<std::string>> successors;
    for (const auto& [id, c] : p.components)
        indegree[id] = 0;
    for (const auto& w : p.wires) {
        ++indegree[w.to.component];
        incoming[w.to.component].push_back(&w);
        successors[w.from.component].push_back(w.to.component);
    }

    ExecutionTrace trace;
    std::set<std::string> ready;
    for (const auto& [id, d] : indegree)
        if (d == 0)
            ready.insert(id);
    while (!ready.empty()) {
        auto id = *ready.begin();
        ready.erase(ready.begin());
        trace.order.push_back(id);
        for (const auto& s : successors[id])
            if (--indegree[s] == 0)
                ready.insert(s);
    }

    ComponentRunner runner{g};
    for (const auto& id : trace.order) {
        const auto& spec = p.components.at(id);
        auto& ct = trace.components[id];
        ct.kind = spec.kind;

        std::map<std::string, const Payload*> inputs;
        for (const auto* w : incoming[id]) {
            const auto& up = trace.components.at(w->from.component);
            if (up.status != Status::ok || !up.output) {
                ct.status = Status::skipped;
                ct.message = "upstream component '" + w->from.component + "' did not complete";
                break;
            }
            inputs[w->to.port] = &*up.output;
        }
        if (ct.status == Status::skipped)
            continue;

        auto started = std::chrono::steady_clock::now();
        try {
            for (const auto& port : input_ports(spec)) {
                if (payload_type(*inputs.at(port.name)) != port.type)
                    throw std::logic_error("payload on " + id + "." + port.name + " is not " +
                                           std::string(to_string(port.type)));
            }
            Payload out = runner.run(spec, inputs);
            auto outs = output_ports(spec);
            if (!outs.empty() && payload_type(out) != outs[0].type)
                throw std::logic_error("component produced " + std::string(to_string(payload_type(out))) +
                                       " instead of " + std::string(to_string(outs[0].type)));
            ct.output = std::move(out);
        } catch (const std::exception& e) {
            ct.status = Status::error;
            ct.message = e.what();
        }
        ct.elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    }
    return trace;
}

json trace_to_json(const ExecutionTrace& t, bool include_timing) {
    json components = json::object();
    for (const auto& [id, c] : t.components) {
        json j{{"kind", to_string(c.kind)}, {"status", to_string(c.status)}};
        if (!c.message.empty())
            j["message"] = c.message;
        if (c.output)
            j["payload"] = payload_to_json(*c.output);
        if (include_timing)
            j["elapsed_ms"] = c.elapsed_ms;
        components[id] = j;
    }
    return {{"order", t.order}, {"components", components}};
}

TableRows trace_to_table(const ExecutionTrace& t, const KnowledgeGraph& g, const std::string& component) {
    auto it = t.components.find(component);
    if (it == t.components.end())
        throw std::invalid_argument("no component '" + component + "' in trace");
    if (!it->second.output)
        throw std::invalid_argument("component '" + component + "' produced no output");
    const auto& out = *it->second.output;
    if (auto* list = std::get_if<EntityList>(&out))
        return entity_table(g, list->iris);
    if (auto* sg = std::get_if<Subgraph>(&out))
        return entity_table(g, sg->nodes);
    if (auto* rows = std::get_if<TableRows>(&out))
        return *rows;
    throw std::invalid_argument("component '" + component + "' produced " + std::string(to_string(payload_type(out))) +
                                ", which carries no entities");
}

}  // namespace skg::dataflow
