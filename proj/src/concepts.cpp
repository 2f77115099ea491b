#include "skg/concepts.hpp"

#include "skg/text.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_set>

namespace skg::concepts {

namespace {

constexpr double kSumTolerance = 1e-9;

bool is_nominal(Pos p) {
    return p == Pos::noun || p == Pos::proper_noun;
}

bool is_chunk_member(Pos p) {
    return is_nominal(p) || p == Pos::adjective;
}

std::string span_name(const CandidateSpan& s) {
    return "[" + std::to_string(s.start) + "," + std::to_string(s.end) + "]";
}

std::vector<double> softmax(const std::vector<double>& logits) {
    if (logits.empty())
        return {};
    double mx = *std::max_element(logits.begin(), logits.end());
    std::vector<double> out(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - mx);
        sum += out[i];
    }
    for (auto& v : out)
        v /= sum;
    return out;
}

std::set<std::string> trigrams(const std::string& word) {
    std::set<std::string> out;
    if (word.size() < 3) {
        if (!word.empty())
            out.insert(word);
        return out;
    }
    for (std::size_t i = 0; i + 3 <= word.size(); ++i)
        out.insert(word.substr(i, 3));
    return out;
}

struct BioTag {
    bool begin = false;
    std::optional<ConceptLabel> label;  // empty for O
};

BioTag parse_tag(std::string_view tag) {
    if (tag == "O")
        return {};
    if (tag.size() > 2 && (tag[0] == 'B' || tag[0] == 'I') && (tag[1] == '_' || tag[1] == '-')) {
        if (auto l = parse_concept_label(tag.substr(2)))
            return {tag[0] == 'B', *l};
    }
    throw ConceptError("unknown BIO tag '" + std::string(tag) + "'");
}

std::size_t label_ordinal(ConceptLabel l) {
    return static_cast<std::size_t>(l);
}

}  // namespace

std::vector<TaggedToken> make_tokens(std::span<const std::string> words, std::span<const Pos> tags) {
    if (words.size() != tags.size())
        throw ConceptError("word and tag counts differ");
    std::vector<TaggedToken> out;
    out.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i)
        out.push_back({words[i], tags[i], i});
    return out;
}

CandidateSpan make_span(std::span<const TaggedToken> tokens, std::size_t start, std::size_t end) {
    if (start > end || end >= tokens.size())
        throw ConceptError("invalid span [" + std::to_string(start) + "," + std::to_string(end) + "]");
    std::string surface;
    for (std::size_t i = start; i <= end; ++i) {
        if (i > start)
            surface.push_back(' ');
        surface += tokens[i].text;
    }
    return {start, end, std::move(surface)};
}

std::vector<CandidateSpan> extract_candidates(std::span<const TaggedToken> tokens, std::size_t max_len) {
    if (max_len == 0)
        throw ConceptError("max_len must be positive");
    std::vector<CandidateSpan> out;
    std::size_t i = 0;
    while (i < tokens.size()) {
        if (!is_chunk_member(tokens[i].pos)) {
            ++i;
            continue;
        }
        std::size_t run_end = i;
        while (run_end + 1 < tokens.size() && is_chunk_member(tokens[run_end + 1].pos))
            ++run_end;
        for (std::size_t s = i; s <= run_end; ++s)
            for (std::size_t e = s; e <= run_end && e - s < max_len; ++e)
                if (is_nominal(tokens[e].pos))
                    out.push_back(make_span(tokens, s, e));
        i = run_end + 1;
    }
    std::sort(out.begin(), out.end());
    return out;
}

QuestionSet default_questions() {
    return {
        {ConceptLabel::application, {"what is the application?", "what is the task?"}},
        {ConceptLabel::data, {"what is the data?", "what is the dataset?"}},
        {ConceptLabel::method, {"what is the method?", "what is the algorithm?", "what is the technique?"}},
        {ConceptLabel::visualization, {"what is the visualization?", "what is the chart?"}},
        {ConceptLabel::evaluation, {"what is the evaluation?"}},
    };
}

void check_scores(const SpanScores& s, std::size_t n) {
    if (s.start.size() != n || s.end.size() != n)
        throw ConceptError("score vectors must match the document length " + std::to_string(n));
    if (n == 0)
        return;
    auto total = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); };
    if (std::abs(total(s.start) - 1.0) > kSumTolerance || std::abs(total(s.end) - 1.0) > kSumTolerance)
        throw ConceptError("start/end scores must each sum to 1");
}

std::vector<std::pair<CandidateSpan, double>> span_distribution(const SpanScores& scores, std::size_t max_len) {
    if (max_len == 0)
        throw ConceptError("max_len must be positive");
    const std::size_t n = scores.start.size();
    check_scores(scores, n);

    std::vector<std::pair<CandidateSpan, double>> out;
    std::vector<double> logits;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n && j - i < max_len; ++j) {
            out.push_back({CandidateSpan{i, j, {}}, 0.0});
            logits.push_back(scores.start[i] * scores.end[j]);
        }
    }
    auto probs = softmax(logits);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k].second = probs[k];
    return out;
}

double span_probability(const SpanScoreTable& table, const std::string& question,
                        const CandidateSpan& span, std::size_t max_len) {
    auto it = table.find(question);
    if (it == table.end())
        throw ConceptError("no scores for question '" + question + "'");
    const auto& scores = it->second;
    const std::size_t n = scores.start.size();
    if (span.start > span.end || span.end >= n)
        throw ConceptError("span " + span_name(span) + " outside document of length " + std::to_string(n));
    if (span.length() > max_len)
        throw ConceptError("span " + span_name(span) + " longer than max_len " + std::to_string(max_len));
    check_scores(scores, n);

    // softmax evaluated at one entry: exp(z - m) / sum exp(z' - m)
    double target = scores.start[span.start] * scores.end[span.end];
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n && j - i < max_len; ++j)
            mx = std::max(mx, scores.start[i] * scores.end[j]);
    double denom = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n && j - i < max_len; ++j)
            denom += std::exp(scores.start[i] * scores.end[j] - mx);
    return std::exp(target - mx) / denom;
}

LabelAssignment assign_label(const SpanScoreTable& table, const QuestionSet& questions,
                             const CandidateSpan& span, std::size_t max_len) {
    std::optional<LabelAssignment> best;
    for (const auto& [label, qs] : questions) {
        for (const auto& q : qs) {
            double p = span_probability(table, q, span, max_len);
            if (!best || p > best->probability)
                best = LabelAssignment{label, p, q};
        }
    }
    if (!best)
        throw ConceptError("question set is empty");
    return *best;
}

std::vector<std::string> question_keywords(const std::string& question) {
    static const std::unordered_set<std::string> stop = {
        "what", "which", "who", "how", "is", "are", "was", "were", "the", "a", "an", "of", "in", "for", "used",
    };
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty() && !stop.count(cur))
            out.push_back(cur);
        cur.clear();
    };
    for (char c : question) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        else
            flush();
    }
    flush();
    return out;
}

SpanScores reference_span_scorer(std::span<const TaggedToken> tokens, const std::string& question) {
    std::set<std::string> keyword_grams;
    for (const auto& k : question_keywords(question)) {
        auto g = trigrams(k);
        keyword_grams.insert(g.begin(), g.end());
    }
    std::vector<double> logits;
    logits.reserve(tokens.size());
    for (const auto& t : tokens) {
        auto g = trigrams(text::to_lower(t.text));
        std::size_t overlap = std::count_if(g.begin(), g.end(),
                                            [&](const std::string& x) { return keyword_grams.count(x) > 0; });
        logits.push_back(static_cast<double>(overlap));
    }
    auto probs = softmax(logits);
    return {probs, probs};
}

SpanScores ReferenceSpanScorer::score(std::span<const TaggedToken> tokens, const std::string& question) const {
    return reference_span_scorer(tokens, question);
}

std::vector<WeakSample> weak_label_document(const std::string& document_id,
                                            std::span<const TaggedToken> tokens,
                                            const QuestionSet& questions, const SpanScorer& scorer,
                                            std::size_t max_len) {
    auto candidates = extract_candidates(tokens, max_len);
    if (candidates.empty())
        return {};
    SpanScoreTable table;
    for (const auto& [label, qs] : questions)
        for (const auto& q : qs)
            table.emplace(q, scorer.score(tokens, q));

    std::vector<WeakSample> out;
    out.reserve(candidates.size());
    for (auto& c : candidates) {
        auto a = assign_label(table, questions, c, max_len);
        out.push_back({document_id, std::move(c), a.label, a.probability});
    }
    return out;
}

std::map<ConceptLabel, std::vector<WeakSample>> select_high_confidence(std::span<const WeakSample> samples,
                                                                       std::size_t k) {
    if (k == 0)
        throw ConceptError("k must be positive");
    std::map<ConceptLabel, std::vector<WeakSample>> out;
    for (const auto& s : samples)
        out[s.label].push_back(s);
    for (auto& [label, list] : out) {
        std::stable_sort(list.begin(), list.end(), [](const WeakSample& a, const WeakSample& b) {
            if (a.probability != b.probability)
                return a.probability > b.probability;
            if (a.document_id != b.document_id)
                return a.document_id < b.document_id;
            return a.span.start < b.span.start;
        });
        if (list.size() > k)
            list.resize(k);
    }
    return out;
}

std::vector<WeakSample> resolve_overlaps(std::vector<WeakSample> samples) {
    std::stable_sort(samples.begin(), samples.end(), [](const WeakSample& a, const WeakSample& b) {
        if (a.probability != b.probability)
            return a.probability > b.probability;
        if (a.span.length() != b.span.length())
            return a.span.length() > b.span.length();
        return a.span.start < b.span.start;
    });
    std::vector<WeakSample> kept;
    for (auto& s : samples) {
        bool clash = std::any_of(kept.begin(), kept.end(),
                                 [&](const WeakSample& k) { return k.span.overlaps(s.span); });
        if (!clash)
            kept.push_back(std::move(s));
    }
    std::sort(kept.begin(), kept.end(),
              [](const WeakSample& a, const WeakSample& b) { return a.span < b.span; });
    return kept;
}

nlohmann::json weak_sample_to_json(const WeakSample& s) {
    return {{"doc_id", s.document_id},  {"start", s.span.start},        {"end", s.span.end},
            {"surface", s.span.surface}, {"label", to_string(s.label)}, {"probability", s.probability}};
}

void write_weak_samples(std::ostream& out, std::span<const WeakSample> samples) {
    for (const auto& s : samples)
        out << weak_sample_to_json(s).dump() << '\n';
}

std::size_t bio_class_index(std::string_view tag) {
    auto t = parse_tag(tag);
    if (!t.label)
        return 0;
    return 1 + 2 * label_ordinal(*t.label) + (t.begin ? 0 : 1);
}

std::string bio_class_name(std::size_t index) {
    if (index == 0)
        return "O";
    if (index >= kBioClassCount)
        throw ConceptError("BIO class index out of range");
    auto label = kConceptLabels[(index - 1) / 2];
    return std::string((index - 1) % 2 == 0 ? "B_" : "I_") + std::string(to_string(label));
}

BioSequence to_bio(std::span<const TaggedToken> tokens, std::span<const Mention> mentions) {
    std::vector<Mention> sorted(mentions.begin(), mentions.end());
    std::sort(sorted.begin(), sorted.end(), [](const Mention& a, const Mention& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const auto& s = sorted[i].first;
        if (s.start > s.end || s.end >= tokens.size())
            throw ConceptError("mention " + span_name(s) + " outside document");
        if (i > 0 && sorted[i - 1].first.overlaps(s))
            throw ConceptError("overlapping mentions " + span_name(sorted[i - 1].first) + " and " + span_name(s));
    }

    BioSequence seq{std::vector<std::string>(tokens.size(), "O")};
    for (const auto& [span, label] : sorted) {
        auto name = std::string(to_string(label));
        seq.labels[span.start] = "B_" + name;
        for (std::size_t i = span.start + 1; i <= span.end; ++i)
            seq.labels[i] = "I_" + name;
    }
    return seq;
}

DecodedMentions decode_bio(std::span<const TaggedToken> tokens, const BioSequence& labels, BioMode mode) {
    if (labels.labels.size() != tokens.size())
        throw ConceptError("label count " + std::to_string(labels.labels.size()) + " != token count " +
                           std::to_string(tokens.size()));
    DecodedMentions out;
    std::optional<std::pair<std::size_t, ConceptLabel>> open;
    auto close = [&](std::size_t last) {
        if (open)
            out.mentions.push_back({make_span(tokens, open->first, last), open->second});
        open.reset();
    };

    for (std::size_t i = 0; i < labels.labels.size(); ++i) {
        auto tag = parse_tag(labels.labels[i]);
        if (!tag.label) {
            close(i - 1);
            continue;
        }
        if (tag.begin) {
            close(i - 1);
            open = {i, *tag.label};
            continue;
        }
        if (open && open->second == *tag.label)
            continue;
        if (mode == BioMode::strict)
            throw ConceptError("dangling " + labels.labels[i] + " at token " + std::to_string(i));
        close(i - 1);
        open = {i, *tag.label};
        ++out.coerced;
    }
    if (!labels.labels.empty())
        close(labels.labels.size() - 1);
    return out;
}

std::vector<Mention> from_bio(std::span<const TaggedToken> tokens, const BioSequence& labels, BioMode mode) {
    return decode_bio(tokens, labels, mode).mentions;
}

void write_bio_document(std::ostream& out, std::span<const TaggedToken> tokens, const BioSequence& labels) {
    if (labels.labels.size() != tokens.size())
        throw ConceptError("label count does not match token count");
    for (std::size_t i = 0; i < tokens.size(); ++i)
        out << tokens[i].text << ' ' << labels.labels[i] << '\n';
    out << '\n';
}

F1Report token_f1(const BioSequence& predicted, const BioSequence& gold) {
    if (predicted.labels.size() != gold.labels.size())
        throw ConceptError("sequence lengths differ: " + std::to_string(predicted.labels.size()) + " vs " +
                           std::to_string(gold.labels.size()));
    F1Report report;
    for (auto l : kConceptLabels)
        report.per_label[l];

    for (std::size_t i = 0; i < gold.labels.size(); ++i) {
        auto p = parse_tag(predicted.labels[i]).label;
        auto g = parse_tag(gold.labels[i]).label;
        if (p && g && *p == *g) {
            ++report.per_label[*p].true_positive;
            continue;
        }
        if (p)
            ++report.per_label[*p].false_positive;
        if (g)
            ++report.per_label[*g].false_negative;
    }

    std::size_t active = 0;
    for (auto& [label, s] : report.per_label) {
        auto pred_total = s.true_positive + s.false_positive;
        auto gold_total = s.true_positive + s.false_negative;
        s.precision = pred_total ? static_cast<double>(s.true_positive) / pred_total : (gold_total ? 0.0 : 1.0);
        s.recall = gold_total ? static_cast<double>(s.true_positive) / gold_total : (pred_total ? 0.0 : 1.0);
        s.f1 = s.precision + s.recall > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
        if (pred_total + gold_total == 0)
            continue;
        ++active;
        report.macro_precision += s.precision;
        report.macro_recall += s.recall;
        report.macro_f1 += s.f1;
    }
    if (active == 0) {
        report.macro_precision = report.macro_recall = report.macro_f1 = 1.0;
    } else {
        report.macro_precision /= active;
        report.macro_recall /= active;
        report.macro_f1 /= active;
    }
    return report;
}

TokenDistribution one_hot(const BioSequence& labels) {
    TokenDistribution out;
    out.reserve(labels.labels.size());
    for (const auto& tag : labels.labels) {
        std::vector<double> row(kBioClassCount, 0.0);
        row[bio_class_index(tag)] = 1.0;
        out.push_back(std::move(row));
    }
    return out;
}

double cross_entropy(const TokenDistribution& truth, const TokenDistribution& predicted) {
    if (truth.size() != predicted.size())
        throw ConceptError("token counts differ");
    if (truth.empty())
        return 0.0;
    auto check = [](const std::vector<double>& row, std::size_t t, const char* which) {
        double sum = 0.0;
        for (double v : row) {
            if (v < 0.0 || !std::isfinite(v))
                throw ConceptError(std::string(which) + " distribution at token " + std::to_string(t) +
                                   " has an invalid entry");
            sum += v;
        }
        if (std::abs(sum - 1.0) > kSumTolerance)
            throw ConceptError(std::string(which) + " distribution at token " + std::to_string(t) +
                               " does not sum to 1");
    };

    double total = 0.0;
    for (std::size_t t = 0; t < truth.size(); ++t) {
        if (truth[t].size() != predicted[t].size())
            throw ConceptError("class counts differ at token " + std::to_string(t));
        check(truth[t], t, "true");
        check(predicted[t], t, "predicted");
        for (std::size_t l = 0; l < truth[t].size(); ++l) {
            if (truth[t][l] == 0.0)
                continue;
            if (predicted[t][l] == 0.0)
                throw ConceptError("predicted probability is 0 where truth is positive (token " +
                                   std::to_string(t) + ", class " + std::to_string(l) + ")");
            total -= truth[t][l] * std::log(predicted[t][l]);
        }
    }
    return total / static_cast<double>(truth.size());
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty())
            out.push_back(cur);
        cur.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        auto c = static_cast<unsigned char>(text[i]);
        if (std::isalnum(c) || c >= 0x80) {
            cur.push_back(text[i]);
        } else if (c == '-' && !cur.empty() && i + 1 < text.size() &&
                   std::isalnum(static_cast<unsigned char>(text[i + 1]))) {
            cur.push_back('-');
        } else {
            flush();
            if (!std::isspace(c))
                out.emplace_back(1, text[i]);
        }
    }
    flush();
    return out;
}

std::vector<TaggedToken> LexiconTagger::tag(std::span<const std::string> words) const {
    static const std::unordered_set<std::string> closed = {
        "a", "an", "the", "this", "that", "these", "those", "we", "our", "us", "it", "its", "they", "their",
        "them", "i", "you", "he", "she", "his", "her", "to", "of", "in", "on", "for", "with", "by", "from",
        "at", "as", "into", "onto", "via", "through", "over", "under", "between", "among", "and", "or",
        "but", "nor", "not", "also", "which", "who", "whom", "whose", "what", "where", "when", "while",
        "how", "than", "then", "such", "both", "each", "all", "some", "any", "many", "more", "most",
        "other", "can", "could", "may", "might", "will", "would", "should", "must", "very", "well",
    };
    static const std::unordered_set<std::string> verbs = {
        "is", "are", "was", "were", "be", "been", "being", "has", "have", "had", "do", "does", "did",
        "conduct", "conducts", "propose", "proposes", "present", "presents", "use", "uses", "apply",
        "applies", "show", "shows", "demonstrate", "demonstrates", "evaluate", "evaluates", "introduce",
        "introduces", "develop", "develops", "design", "designs", "provide", "provides", "enable",
        "enables", "support", "supports", "describe", "describes", "explore", "explores", "analyze",
        "analyzes", "compare", "compares", "improve", "improves", "help", "helps", "allow", "allows",
        "build", "builds", "extract", "extracts", "identify", "identifies", "reveal", "reveals",
    };
    static const std::unordered_set<std::string> adjectives = {
        "new", "novel", "large", "small", "high", "low", "big", "deep", "complex", "simple", "visual",
        "interactive", "multiple", "different", "various", "effective", "efficient", "semantic",
    };
    static const std::vector<std::string> adjective_suffixes = {"al", "ive", "ous", "ic", "able", "ible", "ful", "less"};

    std::vector<TaggedToken> out;
    out.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto& w = words[i];
        auto low = text::to_lower(w);
        Pos pos = Pos::noun;
        auto c0 = static_cast<unsigned char>(w.empty() ? ' ' : w[0]);
        if (w.empty() || (!std::isalpha(c0) && c0 < 0x80) || closed.count(low)) {
            pos = Pos::other;
        } else if (verbs.count(low)) {
            pos = Pos::verb;
        } else if (adjectives.count(low)) {
            pos = Pos::adjective;
        } else if (low.size() > 4 && low.ends_with("ly")) {
            pos = Pos::other;
        } else if (i > 0 && std::isupper(c0)) {
            pos = Pos::proper_noun;
        } else if (low.size() > 5 && std::any_of(adjective_suffixes.begin(), adjective_suffixes.end(),
                                                 [&](const std::string& s) { return low.ends_with(s); })) {
            pos = Pos::adjective;
        }
        out.push_back({w, pos, i});
    }
    return out;
}

std::vector<TaggedToken> LexiconTagger::tag_text(std::string_view text) const {
    auto words = tokenize(text);
    return tag(words);
}

}  // namespace skg::concepts
