#include "skg/api.hpp"
#include "skg/concepts.hpp"
#include "skg/corpus.hpp"
#include "skg/dataflow.hpp"
#include "skg/graph.hpp"
#include "skg/linker.hpp"
#include "skg/turtle.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>

using nlohmann::json;

namespace {

std::vector<skg::corpus::PaperRecord> read_corpus(const std::string& path, const std::string& errors_path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    auto parsed = skg::corpus::parse_corpus(in);
    for (const auto& e : parsed.errors)
        std::cerr << path << ":" << e.line << ": " << e.message << "\n";
    if (!errors_path.empty()) {
        std::ofstream out(errors_path);
        out << skg::corpus::errors_to_json(parsed.errors).dump(2) << "\n";
    }
    return std::move(parsed.records);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    return out;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    return json::parse(in);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scholarly knowledge graph tools"};
    app.require_subcommand(1);

    // ingest
    std::string corpus_path, out_path, errors_path, coverage_path, field, merge_path, merge_source = "extra";
    std::string ns = std::string(skg::kDefaultNamespace), linker_url;
    std::vector<std::string> venue_keywords;
    double threshold = skg::kDefaultLinkConfidence;
    auto* ingest = app.add_subcommand("ingest", "Build a Turtle graph from a JSONL corpus");
    ingest->add_option("corpus", corpus_path, "Corpus JSONL")->required()->check(CLI::ExistingFile);
    ingest->add_option("-o,--output", out_path, "Turtle output")->required();
    ingest->add_option("--errors", errors_path, "Write line errors as JSON");
    ingest->add_option("--coverage", coverage_path, "Write attribute coverage as JSON");
    ingest->add_option("--field", field, "Keep papers with this field of study");
    ingest->add_option("--venue", venue_keywords, "Keep papers whose venue/journal contains a keyword");
    ingest->add_option("--merge", merge_path, "Second corpus merged by title")->check(CLI::ExistingFile);
    ingest->add_option("--merge-source", merge_source, "Id prefix for unmatched merged records");
    ingest->add_option("--namespace", ns, "IRI namespace");
    ingest->add_option("--linker", linker_url, "Spotlight-compatible base URL");
    ingest->add_option("--threshold", threshold, "Linker similarity threshold")->check(CLI::Range(0.0, 1.0));

    // extract
    std::string extract_corpus, samples_path, bio_path;
    std::size_t k = skg::concepts::kDefaultTopK, max_len = skg::concepts::kDefaultMaxSpanLength;
    auto* extract = app.add_subcommand("extract", "Weakly label concept mentions in abstracts");
    extract->add_option("corpus", extract_corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
    extract->add_option("--samples", samples_path, "Selected samples as JSONL")->required();
    extract->add_option("--bio", bio_path, "BIO-tagged documents (CoNLL)");
    extract->add_option("-k", k, "Samples kept per label")->check(CLI::PositiveNumber);
    extract->add_option("--max-len", max_len, "Longest candidate span")->check(CLI::PositiveNumber);

    // stats
    std::string stats_graph;
    auto* stats = app.add_subcommand("stats", "Entity and relation counts of a Turtle graph");
    stats->add_option("graph", stats_graph, "Turtle file")->required()->check(CLI::ExistingFile);

    // run
    std::string run_graph, pipeline_path;
    bool no_timing = false;
    auto* run = app.add_subcommand("query", "Execute a pipeline document against a graph");
    run->add_option("graph", run_graph, "Turtle file")->required()->check(CLI::ExistingFile);
    run->add_option("pipeline", pipeline_path, "Pipeline JSON")->required()->check(CLI::ExistingFile);
    run->add_flag("--no-timing", no_timing, "Omit elapsed times from the trace");

    // serve
    skg::api::ServerConfig config;
    auto* serve = app.add_subcommand("serve", "Serve the HTTP API");
    serve->add_option("--graph", config.graph_path, "Turtle file")->check(CLI::ExistingFile);
    serve->add_option("--corpus", config.corpus_path, "Corpus JSONL to build from")->check(CLI::ExistingFile);
    serve->add_option("--host", config.host, "Bind address");
    serve->add_option("--port", config.port, "Port");
    serve->add_option("--linker", config.linker_url, "Spotlight-compatible base URL");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest) {
            auto records = read_corpus(corpus_path, errors_path);
            if (!merge_path.empty())
                records = skg::corpus::merge_by_title(std::move(records), read_corpus(merge_path, ""), merge_source);
            if (!field.empty())
                records = skg::corpus::filter_by_field(records, field);
            if (!venue_keywords.empty())
                records = skg::corpus::filter_by_venues(records, skg::corpus::match_venues(records, venue_keywords));
            if (!coverage_path.empty())
                open_output(coverage_path) << skg::corpus::coverage_to_json(skg::corpus::coverage_stats(records)).dump(2)
                                           << "\n";

            std::unique_ptr<skg::SpotlightClient> spotlight;
            std::unique_ptr<skg::CachingLinker> cache;
            skg::BuildOptions options;
            options.ns = ns;
            options.link_threshold = threshold;
            if (!linker_url.empty()) {
                spotlight = std::make_unique<skg::SpotlightClient>(linker_url);
                cache = std::make_unique<skg::CachingLinker>(*spotlight);
                options.linker = cache.get();
            }
            auto built = skg::build_graph(records, options);
            for (const auto& d : built.report.dropped_citations)
                std::cerr << "dropped citation " << d.paper_id << " -> " << d.target_id << ": " << d.reason << "\n";
            for (const auto& w : built.report.warnings)
                std::cerr << "warning: " << w << "\n";
            auto out = open_output(out_path);
            skg::turtle::serialize_turtle(built.graph, out, ns);
            std::cout << skg::stats_to_json(built.graph.stats()).dump(2) << "\n";
        } else if (*extract) {
            namespace c = skg::concepts;
            std::ifstream in(extract_corpus);
            auto records = skg::corpus::parse_corpus(in).records;
            c::LexiconTagger tagger;
            c::ReferenceSpanScorer scorer;
            auto questions = c::default_questions();
            std::map<std::string, std::vector<c::TaggedToken>> documents;
            std::vector<c::WeakSample> pool;
            for (const auto& r : records) {
                if (!r.abstract || r.abstract->empty())
                    continue;
                auto tokens = tagger.tag_text(*r.abstract);
                auto samples = c::resolve_overlaps(c::weak_label_document(r.id, tokens, questions, scorer, max_len));
                pool.insert(pool.end(), samples.begin(), samples.end());
                documents.emplace(r.id, std::move(tokens));
            }
            std::vector<c::WeakSample> selected;
            for (auto& [label, samples] : c::select_high_confidence(pool, k))
                selected.insert(selected.end(), samples.begin(), samples.end());
            auto samples_out = open_output(samples_path);
            c::write_weak_samples(samples_out, selected);
            if (!bio_path.empty()) {
                std::map<std::string, std::vector<c::Mention>> mentions;
                for (const auto& s : selected)
                    mentions[s.document_id].emplace_back(s.span, s.label);
                auto out = open_output(bio_path);
                for (const auto& [id, tokens] : documents) {
                    auto it = mentions.find(id);
                    std::vector<c::Mention> m = it == mentions.end() ? std::vector<c::Mention>{} : it->second;
                    c::write_bio_document(out, tokens, c::to_bio(tokens, m));
                }
            }
            std::cout << selected.size() << " samples from " << documents.size() << " abstracts\n";
        } else if (*stats) {
            auto g = skg::turtle::load_turtle_file(stats_graph);
            std::cout << skg::stats_to_json(g.stats()).dump(2) << "\n";
        } else if (*run) {
            auto g = skg::turtle::load_turtle_file(run_graph);
            auto pipeline = skg::dataflow::pipeline_from_json(read_json_file(pipeline_path));
            auto violations = skg::dataflow::validate(pipeline);
            if (!violations.empty()) {
                std::cerr << skg::dataflow::violations_to_json(violations).dump(2) << "\n";
                return 3;
            }
            auto trace = skg::dataflow::execute(pipeline, g);
            std::cout << skg::dataflow::trace_to_json(trace, !no_timing).dump(2) << "\n";
        } else if (*serve) {
            if (serve->count("--graph") == 0 && serve->count("--corpus") == 0 && config.graph_path.empty())
                config.corpus_path.clear();
            config = skg::api::apply_env(config);
            skg::api::serve(config);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
