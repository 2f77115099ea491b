#pragma once

#include "skg/ontology.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace skg::concepts {

enum class Pos { noun, proper_noun, adjective, verb, other };

struct TaggedToken {
    std::string text;
    Pos pos = Pos::other;
    std::size_t index = 0;
};

// Builds tokens with contiguous indices from parallel text/POS lists.
std::vector<TaggedToken> make_tokens(std::span<const std::string> words, std::span<const Pos> tags);

struct CandidateSpan {
    std::size_t start = 0;  // inclusive
    std::size_t end = 0;    // inclusive
    std::string surface;

    std::size_t length() const { return end - start + 1; }
    bool overlaps(const CandidateSpan& o) const { return start <= o.end && o.start <= end; }
    bool operator==(const CandidateSpan& o) const { return start == o.start && end == o.end; }
    auto operator<=>(const CandidateSpan& o) const {
        return std::pair(start, end) <=> std::pair(o.start, o.end);
    }
};

struct ConceptError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultMaxSpanLength = 6;
inline constexpr std::size_t kDefaultTopK = 200;

CandidateSpan make_span(std::span<const TaggedToken> tokens, std::size_t start, std::size_t end);

// Noun-phrase chunks matching (ADJ|NOUN|PROPN)* (NOUN|PROPN): every
// noun-terminated span inside a maximal run, no longer than max_len tokens.
// Sorted by (start, end).
std::vector<CandidateSpan> extract_candidates(std::span<const TaggedToken> tokens,
                                              std::size_t max_len = kDefaultMaxSpanLength);

// ---------------------------------------------------------------------------
// Question-answering span scores

using QuestionSet = std::map<ConceptLabel, std::vector<std::string>>;

QuestionSet default_questions();

// Softmax-normalized start/end position scores for one question.
struct SpanScores {
    std::vector<double> start;
    std::vector<double> end;
};

// Keyed by question text.
using SpanScoreTable = std::map<std::string, SpanScores>;

// Throws ConceptError unless both vectors have length n and sum to 1.
void check_scores(const SpanScores& s, std::size_t n);

// Probability of every admissible span (start <= end, end - start < max_len)
// under softmax(start[i] * end[j]). Entries follow (start, end) order.
std::vector<std::pair<CandidateSpan, double>> span_distribution(const SpanScores& scores,
                                                                std::size_t max_len);

double span_probability(const SpanScoreTable& table, const std::string& question,
                        const CandidateSpan& span, std::size_t max_len = kDefaultMaxSpanLength);

struct LabelAssignment {
    ConceptLabel label;
    double probability;
    std::string question;
};

// Argmax over every question in `questions`; the first maximal question (in
// label order, then listed order) wins ties.
LabelAssignment assign_label(const SpanScoreTable& table, const QuestionSet& questions,
                             const CandidateSpan& span,
                             std::size_t max_len = kDefaultMaxSpanLength);

// Produces start/end scores for a question over a tokenized document.
class SpanScorer {
public:
    virtual ~SpanScorer() = default;
    virtual SpanScores score(std::span<const TaggedToken> tokens, const std::string& question) const = 0;
};

// Lexical stand-in for a QA model: a token's logit is the number of
// character trigrams it shares with the question's keywords.
class ReferenceSpanScorer final : public SpanScorer {
public:
    SpanScores score(std::span<const TaggedToken> tokens, const std::string& question) const override;
};

SpanScores reference_span_scorer(std::span<const TaggedToken> tokens, const std::string& question);

// Keywords of a question: lowercased alphanumeric words minus interrogative
// and function words.
std::vector<std::string> question_keywords(const std::string& question);

// ---------------------------------------------------------------------------
// Weak supervision

struct WeakSample {
    std::string document_id;
    CandidateSpan span;
    ConceptLabel label = ConceptLabel::application;
    double probability = 0.0;
};

// Candidates of one document, each labelled by its best question.
std::vector<WeakSample> weak_label_document(const std::string& document_id,
                                            std::span<const TaggedToken> tokens,
                                            const QuestionSet& questions, const SpanScorer& scorer,
                                            std::size_t max_len = kDefaultMaxSpanLength);

// Per label: probability descending, ties by (document_id, start) ascending,
// truncated to k.
std::map<ConceptLabel, std::vector<WeakSample>> select_high_confidence(std::span<const WeakSample> samples,
                                                                       std::size_t k = kDefaultTopK);

// Drops overlapping mentions of one document: higher probability wins, then
// the longer span, then the earlier start. Output sorted by start.
std::vector<WeakSample> resolve_overlaps(std::vector<WeakSample> samples);

nlohmann::json weak_sample_to_json(const WeakSample& s);
void write_weak_samples(std::ostream& out, std::span<const WeakSample> samples);

// ---------------------------------------------------------------------------
// BIO encoding

using Mention = std::pair<CandidateSpan, ConceptLabel>;

struct BioSequence {
    std::vector<std::string> labels;
    bool operator==(const BioSequence&) const = default;
};

inline constexpr std::size_t kBioClassCount = 11;

// "O" is class 0; B_x is 1 + 2*x, I_x is 2 + 2*x for x in label order.
std::size_t bio_class_index(std::string_view tag);
std::string bio_class_name(std::size_t index);

BioSequence to_bio(std::span<const TaggedToken> tokens, std::span<const Mention> mentions);

enum class BioMode { strict, lenient };

struct DecodedMentions {
    std::vector<Mention> mentions;
    std::size_t coerced = 0;  // dangling I_x tags treated as B_x (lenient mode)
};

DecodedMentions decode_bio(std::span<const TaggedToken> tokens, const BioSequence& labels,
                           BioMode mode = BioMode::strict);

std::vector<Mention> from_bio(std::span<const TaggedToken> tokens, const BioSequence& labels,
                              BioMode mode = BioMode::strict);

// CoNLL-style: "token label" per line, blank line after each document.
void write_bio_document(std::ostream& out, std::span<const TaggedToken> tokens, const BioSequence& labels);

// ---------------------------------------------------------------------------
// Metrics

struct LabelScore {
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t false_negative = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct F1Report {
    std::map<ConceptLabel, LabelScore> per_label;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
};

// Token-level scores; B/I prefixes are ignored. The macro average runs over
// labels present in either sequence (1.0 when neither has any concept).
F1Report token_f1(const BioSequence& predicted, const BioSequence& gold);

using TokenDistribution = std::vector<std::vector<double>>;

TokenDistribution one_hot(const BioSequence& labels);

// Mean over tokens of -sum_l P(t,l) ln Q(t,l).
double cross_entropy(const TokenDistribution& truth, const TokenDistribution& predicted);

// ---------------------------------------------------------------------------
// Text preparation

std::vector<std::string> tokenize(std::string_view text);

// Small closed-class lexicon plus suffix rules. Good enough for fixtures and
// demos; real pipelines should supply tagged tokens.
class LexiconTagger {
public:
    std::vector<TaggedToken> tag(std::span<const std::string> words) const;
    std::vector<TaggedToken> tag_text(std::string_view text) const;
};

}  // namespace skg::concepts
