#include "skg/turtle.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace skg::turtle {

ParseError::ParseError(std::size_t l, std::size_t c, const std::string& message)
    : std::runtime_error("turtle:" + std::to_string(l) + ":" + std::to_string(c) + ": " + message),
      line(l),
      column(c) {}

std::string vocabulary_namespace(std::string_view ns) {
    std::string base(ns);
    while (!base.empty() && base.back() == '/')
        base.pop_back();
    return base + "/ontology#";
}

namespace {

bool is_attribute(std::string_view name) {
    return std::find(std::begin(kAttributeVocabulary), std::end(kAttributeVocabulary), name) !=
           std::end(kAttributeVocabulary);
}

std::string escape_literal(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

std::string escape_iri(std::string_view s) {
    std::string out;
    static constexpr char hex[] = "0123456789ABCDEF";
    for (char c : s) {
        auto uc = static_cast<unsigned char>(c);
        if (uc <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
            c == '`' || c == '\\') {
            out += "\\u00";
            out.push_back(hex[uc >> 4]);
            out.push_back(hex[uc & 0xF]);
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::string local_name(std::string_view iri) {
    auto pos = iri.find_last_of("#/");
    return std::string(pos == std::string_view::npos ? iri : iri.substr(pos + 1));
}

void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

enum class Tok { iri, pname, literal, langtag, datatype_mark, keyword, punct, eof };

struct Token {
    Tok kind = Tok::eof;
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_space();
        Token t;
        t.line = line_;
        t.column = col_;
        if (pos_ >= src_.size())
            return t;
        char c = src_[pos_];
        if (c == '<') {
            t.kind = Tok::iri;
            t.text = read_iri();
        } else if (c == '"' || c == '\'') {
            t.kind = Tok::literal;
            t.text = read_string();
        } else if (c == '@') {
            advance();
            std::string word = read_while([](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '-'; });
            if (word == "prefix" || word == "base") {
                t.kind = Tok::keyword;
                t.text = "@" + word;
            } else {
                if (word.empty())
                    fail(t, "empty language tag");
                t.kind = Tok::langtag;
                t.text = word;
            }
        } else if (c == '^') {
            advance();
            if (peek() != '^')
                fail(t, "expected '^^'");
            advance();
            t.kind = Tok::datatype_mark;
        } else if (c == '.' || c == ';' || c == ',' || c == '[' || c == ']' || c == '(' || c == ')') {
            // A '.' directly followed by a digit belongs to a number.
            if (c == '.' && pos_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
                t.kind = Tok::literal;
                t.text = read_while([](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' || ch == '+'; });
            } else {
                advance();
                t.kind = Tok::punct;
                t.text = std::string(1, c);
            }
        } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+') {
            t.kind = Tok::literal;
            t.text = read_while([](char ch) {
                return std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' || ch == '+';
            });
            while (!t.text.empty() && t.text.back() == '.') {
                t.text.pop_back();
                --pos_;
                --col_;
            }
        } else {
            std::string word = read_while([](char ch) {
                auto uc = static_cast<unsigned char>(ch);
                return std::isalnum(uc) || ch == '_' || ch == '-' || ch == ':' || ch == '.' || ch == '%' || uc >= 0x80;
            });
            if (word.empty())
                fail(t, std::string("unexpected character '") + c + "'");
            // A trailing '.' terminates the statement rather than the name.
            while (word.size() > 1 && word.back() == '.') {
                word.pop_back();
                --pos_;
                --col_;
            }
            if (word.find(':') != std::string::npos) {
                t.kind = Tok::pname;
            } else {
                t.kind = Tok::keyword;
            }
            t.text = word;
        }
        return t;
    }

    [[noreturn]] void fail(const Token& at, const std::string& msg) const { throw ParseError(at.line, at.column, msg); }

private:
    char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    template <class Pred>
    std::string read_while(Pred pred) {
        std::string out;
        while (pos_ < src_.size() && pred(src_[pos_])) {
            out.push_back(src_[pos_]);
            advance();
        }
        return out;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::uint32_t read_hex(std::size_t digits, const Token& at) {
        std::uint32_t v = 0;
        for (std::size_t i = 0; i < digits; ++i) {
            char c = peek();
            int d;
            if (c >= '0' && c <= '9')
                d = c - '0';
            else if (c >= 'a' && c <= 'f')
                d = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F')
                d = c - 'A' + 10;
            else
                fail(at, "bad unicode escape");
            v = v * 16 + static_cast<std::uint32_t>(d);
            advance();
        }
        return v;
    }

    std::string read_iri() {
        Token at{Tok::iri, {}, line_, col_};
        advance();  // <
        std::string out;
        while (true) {
            if (pos_ >= src_.size() || peek() == '\n')
                fail(at, "unterminated IRI");
            char c = peek();
            if (c == '>') {
                advance();
                return out;
            }
            if (c == '\\') {
                advance();
                char e = peek();
                advance();
                if (e == 'u')
                    append_utf8(out, read_hex(4, at));
                else if (e == 'U')
                    append_utf8(out, read_hex(8, at));
                else
                    fail(at, "bad escape in IRI");
                continue;
            }
            if (c == ' ' || c == '<' || c == '"')
                fail(at, "illegal character in IRI");
            out.push_back(c);
            advance();
        }
    }

    std::string read_string() {
        Token at{Tok::literal, {}, line_, col_};
        char q = peek();
        bool long_form = pos_ + 2 < src_.size() && src_[pos_ + 1] == q && src_[pos_ + 2] == q;
        advance();
        if (long_form) {
            advance();
            advance();
        }
        std::string out;
        while (true) {
            if (pos_ >= src_.size())
                fail(at, "unterminated string literal");
            char c = peek();
            if (!long_form && (c == '\n' || c == '\r'))
                fail(at, "newline in string literal");
            if (c == q) {
                if (!long_form) {
                    advance();
                    return out;
                }
                if (pos_ + 2 < src_.size() && src_[pos_ + 1] == q && src_[pos_ + 2] == q) {
                    advance();
                    advance();
                    advance();
                    return out;
                }
            }
            if (c == '\\') {
                advance();
                if (pos_ >= src_.size())
                    fail(at, "unterminated string literal");
                char e = peek();
                advance();
                switch (e) {
                case 't': out.push_back('\t'); break;
                case 'n': out.push_back('\n'); break;
                case 'r': out.push_back('\r'); break;
                case 'b': out.push_back('\b'); break;
                case 'f': out.push_back('\f'); break;
                case '"': out.push_back('"'); break;
                case '\'': out.push_back('\''); break;
                case '\\': out.push_back('\\'); break;
                case 'u': append_utf8(out, read_hex(4, at)); break;
                case 'U': append_utf8(out, read_hex(8, at)); break;
                default: fail(at, std::string("bad escape '\\") + e + "'");
                }
                continue;
            }
            out.push_back(c);
            advance();
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

struct Node {
    bool is_literal = false;
    std::string value;
};

struct PendingEntity {
    std::optional<EntityType> type;
    std::map<std::string, std::string> attributes;
    std::size_t line = 0;
    std::size_t column = 0;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) { shift(); }

    KnowledgeGraph run() {
        while (cur_.kind != Tok::eof) {
            if (cur_.kind == Tok::keyword && (cur_.text == "@prefix" || cur_.text == "PREFIX" || cur_.text == "prefix")) {
                directive_prefix();
            } else if (cur_.kind == Tok::keyword && (cur_.text == "@base" || cur_.text == "BASE" || cur_.text == "base")) {
                lex_.fail(cur_, "@base is not supported");
            } else {
                statement();
            }
        }
        if (!unknown_.empty()) {
            std::string names;
            for (const auto& n : unknown_)
                names += (names.empty() ? "" : ", ") + n;
            throw ParseError(unknown_line_, unknown_col_, "unknown predicate(s): " + names);
        }

        std::vector<Entity> entities;
        for (auto& [iri, p] : pending_) {
            if (!p.type)
                throw ParseError(p.line, p.column, "entity " + iri + " has no rdf:type");
            entities.push_back({iri, *p.type, std::move(p.attributes)});
        }
        return KnowledgeGraph(std::move(entities), std::move(triples_));
    }

private:
    void shift() { cur_ = lex_.next(); }

    void expect_punct(char c) {
        if (cur_.kind != Tok::punct || cur_.text[0] != c)
            lex_.fail(cur_, std::string("expected '") + c + "'");
        shift();
    }

    void directive_prefix() {
        bool sparql_style = cur_.text != "@prefix";
        shift();
        if (cur_.kind != Tok::pname || cur_.text.back() != ':')
            lex_.fail(cur_, "expected prefix name ending in ':'");
        auto name = cur_.text.substr(0, cur_.text.size() - 1);
        shift();
        if (cur_.kind != Tok::iri)
            lex_.fail(cur_, "expected IRI after prefix name");
        prefixes_[name] = cur_.text;
        shift();
        if (!sparql_style)
            expect_punct('.');
    }

    std::string resolve(const Token& t) {
        if (t.kind == Tok::iri)
            return t.text;
        if (t.kind == Tok::pname) {
            auto colon = t.text.find(':');
            auto it = prefixes_.find(t.text.substr(0, colon));
            if (it == prefixes_.end())
                lex_.fail(t, "undefined prefix '" + t.text.substr(0, colon) + "'");
            return it->second + t.text.substr(colon + 1);
        }
        lex_.fail(t, "expected an IRI");
    }

    void statement() {
        Token subj_tok = cur_;
        if (cur_.kind == Tok::punct && cur_.text == "[")
            lex_.fail(cur_, "blank nodes are not supported");
        auto subject = resolve(cur_);
        shift();
        auto& pe = pending_[subject];
        if (pe.line == 0) {
            pe.line = subj_tok.line;
            pe.column = subj_tok.column;
        }

        while (true) {
            Token verb = cur_;
            std::string predicate;
            if (verb.kind == Tok::keyword && verb.text == "a")
                predicate = std::string(kRdfType);
            else
                predicate = resolve(verb);
            shift();

            while (true) {
                Node obj = object();
                apply(subject, predicate, verb, obj);
                if (cur_.kind == Tok::punct && cur_.text == ",") {
                    shift();
                    continue;
                }
                break;
            }

            if (cur_.kind == Tok::punct && cur_.text == ";") {
                while (cur_.kind == Tok::punct && cur_.text == ";")
                    shift();
                if (cur_.kind == Tok::punct && cur_.text == ".")
                    break;
                continue;
            }
            break;
        }
        expect_punct('.');
    }

    Node object() {
        Token t = cur_;
        if (t.kind == Tok::literal) {
            shift();
            if (cur_.kind == Tok::langtag) {
                shift();
            } else if (cur_.kind == Tok::datatype_mark) {
                shift();
                resolve(cur_);
                shift();
            }
            return {true, t.text};
        }
        if (t.kind == Tok::keyword && (t.text == "true" || t.text == "false")) {
            shift();
            return {true, t.text};
        }
        if (t.kind == Tok::punct && (t.text == "[" || t.text == "("))
            lex_.fail(t, "blank nodes and collections are not supported");
        auto iri = resolve(t);
        shift();
        return {false, iri};
    }

    void apply(const std::string& subject, const std::string& predicate, const Token& at, const Node& obj) {
        if (predicate == kRdfType) {
            if (obj.is_literal)
                lex_.fail(at, "rdf:type object must be an IRI");
            auto type = parse_entity_type(local_name(obj.value));
            if (!type || to_string(*type) != local_name(obj.value))
                lex_.fail(at, "unknown entity type " + obj.value);
            auto& pe = pending_[subject];
            if (pe.type && *pe.type != *type)
                lex_.fail(at, "conflicting types for " + subject);
            pe.type = *type;
            return;
        }
        auto name = local_name(predicate);
        if (auto p = parse_predicate(name)) {
            if (obj.is_literal)
                lex_.fail(at, std::string(to_string(*p)) + " expects an entity IRI object");
            triples_.push_back({subject, *p, obj.value});
            return;
        }
        if (is_attribute(name)) {
            if (!obj.is_literal)
                lex_.fail(at, "attribute " + name + " expects a literal object");
            pending_[subject].attributes[name] = obj.value;
            return;
        }
        if (unknown_.empty()) {
            unknown_line_ = at.line;
            unknown_col_ = at.column;
        }
        unknown_.insert(predicate);
    }

    Lexer lex_;
    Token cur_;
    std::map<std::string, std::string> prefixes_;
    std::map<std::string, PendingEntity> pending_;
    std::vector<Triple> triples_;
    std::set<std::string> unknown_;
    std::size_t unknown_line_ = 0;
    std::size_t unknown_col_ = 0;
};

}  // namespace

void serialize_turtle(const KnowledgeGraph& g, std::ostream& out, std::string_view ns) {
    out << "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n";
    out << "@prefix skg: <" << escape_iri(vocabulary_namespace(ns)) << "> .\n";

    // triples() is sorted by subject, so each entity's relations are contiguous.
    const auto& triples = g.triples();
    auto next = triples.begin();
    for (const auto& e : g.entities()) {
        out << "\n<" << escape_iri(e.iri) << "> a skg:" << to_string(e.type);
        for (const auto& [k, v] : e.attributes) {
            if (!is_attribute(k))
                throw GraphError("attribute '" + k + "' of " + e.iri + " is outside the Turtle vocabulary");
            out << " ;\n    skg:" << k << " \"" << escape_literal(v) << '"';
        }
        while (next != triples.end() && next->s < e.iri)
            ++next;
        std::optional<Predicate> last;
        for (; next != triples.end() && next->s == e.iri; ++next) {
            if (last == next->p) {
                out << " ,\n        <" << escape_iri(next->o) << '>';
            } else {
                out << " ;\n    skg:" << to_string(next->p) << " <" << escape_iri(next->o) << '>';
                last = next->p;
            }
        }
        out << " .\n";
    }
}

std::string to_turtle(const KnowledgeGraph& g, std::string_view ns) {
    std::ostringstream os;
    serialize_turtle(g, os, ns);
    return os.str();
}

KnowledgeGraph parse_turtle(std::string_view source) {
    return Parser(source).run();
}

KnowledgeGraph parse_turtle(std::istream& in) {
    std::stringstream ss;
    ss << in.rdbuf();
    auto s = ss.str();
    return parse_turtle(std::string_view(s));
}

KnowledgeGraph load_turtle_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open graph file " + path);
    return parse_turtle(in);
}

}  // namespace skg::turtle
