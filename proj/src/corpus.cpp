#include "skg/corpus.hpp"

#include "skg/text.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace skg::corpus {

using nlohmann::json;

namespace {

std::optional<std::string> optional_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null())
        return std::nullopt;
    if (!it->is_string())
        throw std::invalid_argument(std::string("'") + key + "' must be a string or null");
    return it->get<std::string>();
}

std::vector<std::string> string_array(const json& j, const char* key) {
    std::vector<std::string> out;
    auto it = j.find(key);
    if (it == j.end() || it->is_null())
        return out;
    if (!it->is_array())
        throw std::invalid_argument(std::string("'") + key + "' must be an array of strings");
    for (const auto& v : *it) {
        if (!v.is_string())
            throw std::invalid_argument(std::string("'") + key + "' must be an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

json optional_to_json(const std::optional<std::string>& v) {
    return v ? json(*v) : json(nullptr);
}

bool non_empty(const std::optional<std::string>& v) {
    return v && !text::trim(*v).empty();
}

template <class T>
void fill_if_empty(std::optional<T>& dst, const std::optional<T>& src) {
    if (!dst && src)
        dst = src;
}

void fill_if_empty(std::optional<std::string>& dst, const std::optional<std::string>& src) {
    if (!non_empty(dst) && non_empty(src))
        dst = src;
}

template <class T>
void fill_if_empty(std::vector<T>& dst, const std::vector<T>& src) {
    if (dst.empty() && !src.empty())
        dst = src;
}

}  // namespace

bool is_valid_paper_id(std::string_view id) {
    if (id.empty())
        return false;
    return std::none_of(id.begin(), id.end(), [](char c) {
        auto uc = static_cast<unsigned char>(c);
        return std::isspace(uc) || std::iscntrl(uc);
    });
}

PaperRecord record_from_json(const json& j) {
    if (!j.is_object())
        throw std::invalid_argument("record is not a JSON object");

    PaperRecord r;
    auto id = j.find("id");
    if (id == j.end() || !id->is_string() || !is_valid_paper_id(id->get<std::string>()))
        throw std::invalid_argument("missing or invalid 'id'");
    r.id = id->get<std::string>();

    auto title = optional_string(j, "title");
    if (!title || text::trim(*title).empty())
        throw std::invalid_argument("missing or empty 'title'");
    r.title = *title;

    r.abstract = optional_string(j, "abstract");
    r.authors = string_array(j, "authors");
    if (auto y = j.find("year"); y != j.end() && !y->is_null()) {
        if (!y->is_number_integer())
            throw std::invalid_argument("'year' must be an integer or null");
        r.year = y->get<int>();
    }
    r.venue = optional_string(j, "venue");
    r.journal = optional_string(j, "journal");
    r.field_of_study = string_array(j, "field_of_study");
    r.outbound_citations = string_array(j, "outbound_citations");
    for (const auto& c : r.outbound_citations)
        if (!is_valid_paper_id(c))
            throw std::invalid_argument("invalid citation id '" + c + "'");
    r.url = optional_string(j, "url");

    if (auto cs = j.find("concepts"); cs != j.end() && !cs->is_null()) {
        if (!cs->is_array())
            throw std::invalid_argument("'concepts' must be an array");
        for (const auto& c : *cs) {
            if (!c.is_object() || !c.contains("surface") || !c["surface"].is_string() ||
                !c.contains("label") || !c["label"].is_string())
                throw std::invalid_argument("concept entries need string 'surface' and 'label'");
            auto label = parse_concept_label(c["label"].get<std::string>());
            if (!label)
                throw std::invalid_argument("unknown concept label '" +
                                            c["label"].get<std::string>() + "'");
            auto surface = c["surface"].get<std::string>();
            if (text::trim(surface).empty())
                throw std::invalid_argument("empty concept surface");
            r.concepts.push_back({std::move(surface), *label});
        }
    }
    return r;
}

json record_to_json(const PaperRecord& r) {
    json concepts = json::array();
    for (const auto& c : r.concepts)
        concepts.push_back({{"surface", c.surface}, {"label", to_string(c.label)}});
    return json{
        {"id", r.id},
        {"title", r.title},
        {"abstract", optional_to_json(r.abstract)},
        {"authors", r.authors},
        {"year", r.year ? json(*r.year) : json(nullptr)},
        {"venue", optional_to_json(r.venue)},
        {"journal", optional_to_json(r.journal)},
        {"field_of_study", r.field_of_study},
        {"outbound_citations", r.outbound_citations},
        {"url", optional_to_json(r.url)},
        {"concepts", concepts},
    };
}

ParseResult parse_corpus(std::istream& in) {
    ParseResult result;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty())
            continue;
        try {
            auto rec = record_from_json(json::parse(line));
            if (!seen.insert(rec.id).second) {
                result.errors.push_back({lineno, "duplicate id '" + rec.id + "'"});
                continue;
            }
            result.records.push_back(std::move(rec));
        } catch (const json::exception& e) {
            result.errors.push_back({lineno, std::string("malformed JSON: ") + e.what()});
        } catch (const std::invalid_argument& e) {
            result.errors.push_back({lineno, e.what()});
        }
    }
    return result;
}

void write_corpus(std::ostream& out, std::span<const PaperRecord> records) {
    for (const auto& r : records)
        out << record_to_json(r).dump() << '\n';
}

json errors_to_json(std::span<const LineError> errors) {
    json arr = json::array();
    for (const auto& e : errors)
        arr.push_back({{"line", e.line}, {"message", e.message}});
    return arr;
}

AttributeCoverage coverage_stats(std::span<const PaperRecord> records) {
    AttributeCoverage cov;
    cov.total = records.size();
    std::size_t title = 0, abstract = 0, author = 0, venue = 0;
    for (const auto& r : records) {
        title += !text::trim(r.title).empty();
        abstract += non_empty(r.abstract);
        author += !r.authors.empty();
        venue += non_empty(r.venue) || non_empty(r.journal);
    }
    auto frac = [&](std::size_t n) {
        return cov.total == 0 ? 1.0 : static_cast<double>(n) / static_cast<double>(cov.total);
    };
    cov.per_attribute = {{"title", frac(title)},
                         {"abstract", frac(abstract)},
                         {"author", frac(author)},
                         {"venue/journal", frac(venue)}};
    return cov;
}

json coverage_to_json(const AttributeCoverage& c) {
    return json{{"total", c.total}, {"per_attribute", c.per_attribute}};
}

std::vector<PaperRecord> filter_by_field(std::span<const PaperRecord> records,
                                         std::string_view field_value) {
    if (text::trim(field_value).empty())
        throw std::invalid_argument("field value must be non-empty");
    std::vector<PaperRecord> out;
    for (const auto& r : records) {
        bool hit = std::any_of(r.field_of_study.begin(), r.field_of_study.end(),
                               [&](const std::string& f) { return text::equals_icase(f, field_value); });
        if (hit)
            out.push_back(r);
    }
    return out;
}

VenueMatch match_venues(std::span<const PaperRecord> records,
                        std::span<const std::string> keywords) {
    if (keywords.empty())
        throw std::invalid_argument("at least one venue keyword is required");
    std::vector<std::string> lowered;
    for (const auto& k : keywords)
        if (!text::trim(k).empty())
            lowered.push_back(text::to_lower(k));

    auto matches = [&](const std::string& name) {
        auto low = text::to_lower(name);
        return std::any_of(lowered.begin(), lowered.end(),
                           [&](const std::string& k) { return low.find(k) != std::string::npos; });
    };

    VenueMatch out;
    for (const auto& r : records) {
        if (non_empty(r.venue) && matches(*r.venue))
            out.venues.insert(*r.venue);
        if (non_empty(r.journal) && matches(*r.journal))
            out.journals.insert(*r.journal);
    }
    return out;
}

std::vector<PaperRecord> filter_by_venues(std::span<const PaperRecord> records,
                                          const VenueMatch& match) {
    std::vector<PaperRecord> out;
    for (const auto& r : records) {
        if ((r.venue && match.venues.count(*r.venue)) ||
            (r.journal && match.journals.count(*r.journal)))
            out.push_back(r);
    }
    return out;
}

std::vector<PaperRecord> merge_by_title(std::vector<PaperRecord> base,
                                        std::span<const PaperRecord> extra,
                                        std::string_view source) {
    std::unordered_map<std::string, std::size_t> by_title;
    std::unordered_set<std::string> ids;
    for (std::size_t i = 0; i < base.size(); ++i) {
        by_title.emplace(text::normalize_title(base[i].title), i);
        ids.insert(base[i].id);
    }

    for (const auto& e : extra) {
        auto key = text::normalize_title(e.title);
        if (auto it = by_title.find(key); it != by_title.end()) {
            auto& dst = base[it->second];
            fill_if_empty(dst.abstract, e.abstract);
            fill_if_empty(dst.authors, e.authors);
            fill_if_empty(dst.year, e.year);
            fill_if_empty(dst.venue, e.venue);
            fill_if_empty(dst.journal, e.journal);
            fill_if_empty(dst.field_of_study, e.field_of_study);
            fill_if_empty(dst.outbound_citations, e.outbound_citations);
            fill_if_empty(dst.url, e.url);
            fill_if_empty(dst.concepts, e.concepts);
            continue;
        }
        PaperRecord added = e;
        added.id = std::string(source) + ":" + e.id;
        for (int n = 2; ids.count(added.id); ++n)
            added.id = std::string(source) + ":" + e.id + "#" + std::to_string(n);
        ids.insert(added.id);
        by_title.emplace(key, base.size());
        base.push_back(std::move(added));
    }
    return base;
}

}  // namespace skg::corpus
