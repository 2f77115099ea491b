#pragma once

#include "skg/graph.hpp"
#include "skg/query.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace skg::dataflow {

enum class PortType { EntityList, Subgraph, WebUri, TableRows, VizData };
enum class ComponentKind { querier, expander, comparer, node_visualizer, table_viewer, node_viewer };
enum class ExpanderOutput { entities, cross_graph, internal_graph, web_uri };
enum class Chart { node_link, sankey };

std::string_view to_string(PortType t);
std::string_view to_string(ComponentKind k);
std::string_view to_string(ExpanderOutput m);
std::string_view to_string(Chart c);

bool is_viewer(ComponentKind k);

// Malformed pipeline document (not a graph-level violation).
struct PipelineFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuerierParams {
    std::vector<std::string> terms;
    EntityType etype = EntityType::Concept;
    std::size_t limit = 20;
};

struct ExpanderParams {
    EntityType target_type = EntityType::Paper;
    std::size_t k = 10;
    ExpanderOutput output_mode = ExpanderOutput::entities;
    std::optional<std::string> select;  // web_uri: concept to hand to the node viewer
};

struct ComparerParams {
    std::size_t inputs = 2;
};

struct NodeVisualizerParams {
    Chart chart = Chart::node_link;
};

struct TableViewerParams {
    PortType input = PortType::EntityList;
};

struct NodeViewerParams {};

using ComponentParams = std::variant<QuerierParams, ExpanderParams, ComparerParams, NodeVisualizerParams,
                                     TableViewerParams, NodeViewerParams>;

struct ComponentSpec {
    ComponentKind kind = ComponentKind::querier;
    nlohmann::json params = nlohmann::json::object();
};

// Throws PipelineFormatError when params do not fit the kind.
ComponentParams parse_params(const ComponentSpec& spec);

struct Port {
    std::string name;
    PortType type;

    bool operator==(const Port&) const = default;
};

// Derived from kind + params; falls back to default params if they are invalid.
std::vector<Port> input_ports(const ComponentSpec& spec);
std::vector<Port> output_ports(const ComponentSpec& spec);

struct Endpoint {
    std::string component;
    std::string port;

    bool operator==(const Endpoint&) const = default;
};

struct Wire {
    Endpoint from;
    Endpoint to;

    bool operator==(const Wire&) const = default;
};

struct Pipeline {
    std::map<std::string, ComponentSpec> components;
    std::vector<Wire> wires;
};

// Document shape: {"components": {id: {"kind", "params"}}, "wires": [{"from": "id.port", "to": "id.port"}]}.
// A bare "id" endpoint names the component's only port on that side.
Pipeline pipeline_from_json(const nlohmann::json& doc);
nlohmann::json pipeline_to_json(const Pipeline& p);

struct Violation {
    std::string code;  // bad_params, unknown_component, unknown_port, type_mismatch, duplicate_input, unwired_input, cycle
    std::string message;
    std::vector<std::string> components;

    bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate(const Pipeline& p);
nlohmann::json violations_to_json(const std::vector<Violation>& v);

// ---------------------------------------------------------------------------
// Payloads

struct EntityList {
    std::vector<std::string> iris;
    std::vector<std::size_t> scores;  // parallel to iris when produced by an expander

    bool operator==(const EntityList&) const = default;
};

using Subgraph = query::Subgraph;

struct WebUri {
    std::optional<std::string> iri;
    std::optional<std::string> url;

    bool operator==(const WebUri&) const = default;
};

struct TableRows {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    bool operator==(const TableRows&) const = default;
};

struct VizNode {
    std::string iri;
    std::string label;
    EntityType type = EntityType::Paper;
    std::size_t degree = 0;
    std::optional<ConceptLabel> group;  // sankey axis
    bool highlighted = false;

    bool operator==(const VizNode&) const = default;
};

struct VizLink {
    std::string source;
    std::string target;
    std::size_t weight = 1;

    bool operator==(const VizLink&) const = default;
};

struct VizData {
    Chart chart = Chart::node_link;
    std::vector<VizNode> nodes;
    std::vector<VizLink> links;

    bool operator==(const VizData&) const = default;
};

using Payload = std::variant<EntityList, Subgraph, WebUri, TableRows, VizData>;

PortType payload_type(const Payload& p);
nlohmann::json payload_to_json(const Payload& p);

// ---------------------------------------------------------------------------
// Execution

enum class Status { ok, error, skipped };
std::string_view to_string(Status s);

struct ComponentTrace {
    ComponentKind kind = ComponentKind::querier;
    Status status = Status::ok;
    std::string message;
    std::optional<Payload> output;
    double elapsed_ms = 0.0;
};

struct ExecutionTrace {
    std::vector<std::string> order;  // topological, ties by id
    std::map<std::string, ComponentTrace> components;
};

struct InvalidPipeline : std::runtime_error {
    explicit InvalidPipeline(std::vector<Violation> v);
    std::vector<Violation> violations;
};

// Throws InvalidPipeline when validate() reports anything. Component
// failures are captured in the trace; their downstream components are
// skipped.
ExecutionTrace execute(const Pipeline& p, const KnowledgeGraph& g);

nlohmann::json trace_to_json(const ExecutionTrace& t, bool include_timing = true);

// One row per entity: iri, type, then every attribute (sorted) across rows.
TableRows entity_table(const KnowledgeGraph& g, const std::vector<std::string>& iris);

// Table for a component's entity-bearing output (EntityList, Subgraph, or
// a table viewer's rows).
TableRows trace_to_table(const ExecutionTrace& t, const KnowledgeGraph& g, const std::string& component);

// Majority has* role of a concept; ties go to the role with more edges
// graph-wide, then to label order.
ConceptLabel sankey_group(const KnowledgeGraph& g, KnowledgeGraph::Index concept_index);

}  // namespace skg::dataflow
