#include "datacat/term.hpp"

#include <cctype>
#include <cstdio>

#include "datacat/error.hpp"
#include "datacat/utf8.hpp"

namespace datacat::graph {

Term Term::iri(std::string value) { return Term(TermKind::Iri, std::move(value), {}, {}); }

Term Term::blank(std::string label) { return Term(TermKind::BlankNode, std::move(label), {}, {}); }

Term Term::literal(std::string lexical, std::string datatype) {
    return Term(TermKind::Literal, std::move(lexical), std::move(datatype), {});
}

Term Term::lang_literal(std::string lexical, std::string language) {
    return Term(TermKind::Literal, std::move(lexical), std::string(kRdfLangString), std::move(language));
}

Term Term::integer(long long value) { return literal(std::to_string(value), std::string(kXsdInteger)); }

std::string Term::to_ntriples() const {
    switch (kind_) {
        case TermKind::Iri:
            return "<" + syntax::escape_iri(value_) + ">";
        case TermKind::BlankNode:
            return "_:" + value_;
        case TermKind::Literal: {
            std::string out = "\"" + syntax::escape_string(value_) + "\"";
            if (!language_.empty()) {
                out += "@" + language_;
            } else if (datatype_ != kXsdString) {
                out += "^^<" + syntax::escape_iri(datatype_) + ">";
            }
            return out;
        }
    }
    return {};
}

std::string Triple::to_ntriples() const {
    return subject.to_ntriples() + " " + predicate.to_ntriples() + " " + object.to_ntriples() + " .";
}

bool is_absolute_iri(std::string_view iri) noexcept {
    if (iri.empty() || std::isalpha(static_cast<unsigned char>(iri[0])) == 0) {
        return false;
    }
    for (std::size_t i = 1; i < iri.size(); ++i) {
        const auto c = static_cast<unsigned char>(iri[i]);
        if (c == ':') {
            return true;
        }
        if (std::isalnum(c) == 0 && c != '+' && c != '-' && c != '.') {
            return false;
        }
    }
    return false;
}

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedTriple, what); }

void check_term(const Term& t, const char* position) {
    if (t.is_iri() && !is_absolute_iri(t.value())) {
        malformed(std::string(position) + " IRI is not absolute: " + t.value());
    }
    if (t.is_blank() && t.value().empty()) {
        malformed(std::string(position) + " blank node has an empty label");
    }
    if (t.is_literal()) {
        if (!is_absolute_iri(t.datatype())) {
            malformed(std::string(position) + " literal datatype is not an absolute IRI");
        }
        if (!t.language().empty() && t.datatype() != kRdfLangString) {
            malformed(std::string(position) + " language-tagged literal must use rdf:langString");
        }
        if (t.language().empty() && t.datatype() == kRdfLangString) {
            malformed(std::string(position) + " rdf:langString literal needs a language tag");
        }
    }
}

}  // namespace

void validate(const Triple& triple) {
    if (triple.subject.is_literal()) {
        malformed("literal in subject position");
    }
    if (!triple.predicate.is_iri()) {
        malformed("predicate must be an IRI");
    }
    check_term(triple.subject, "subject");
    check_term(triple.predicate, "predicate");
    check_term(triple.object, "object");
}

namespace syntax {

namespace {

[[noreturn]] void fail(std::size_t offset, std::string message) { throw Failure{offset, std::move(message)}; }

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

// Reads the hex digits of \uXXXX or \UXXXXXXXX; `pos` is at 'u' or 'U'.
void read_uchar(std::string_view s, std::size_t& pos, std::string& out) {
    const std::size_t digits = s[pos] == 'u' ? 4 : 8;
    const std::size_t start = pos - 1;
    ++pos;
    if (pos + digits > s.size()) {
        fail(start, "truncated unicode escape");
    }
    char32_t cp = 0;
    for (std::size_t k = 0; k < digits; ++k) {
        const int v = hex_value(s[pos + k]);
        if (v < 0) {
            fail(start, "bad hex digit in unicode escape");
        }
        cp = (cp << 4) | static_cast<char32_t>(v);
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        fail(start, "unicode escape is not a scalar value");
    }
    pos += digits;
    utf8::append(out, cp);
}

}  // namespace

void skip_space(std::string_view s, std::size_t& pos) noexcept {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) {
        ++pos;
    }
}

std::string read_iriref(std::string_view s, std::size_t& pos) {
    if (pos >= s.size() || s[pos] != '<') {
        fail(pos, "expected '<'");
    }
    const std::size_t start = pos++;
    std::string out;
    while (true) {
        if (pos >= s.size()) {
            fail(start, "unterminated IRI");
        }
        const char c = s[pos];
        if (c == '>') {
            ++pos;
            break;
        }
        if (c == '\\') {
            ++pos;
            if (pos >= s.size() || (s[pos] != 'u' && s[pos] != 'U')) {
                fail(pos - 1, "only \\u and \\U escapes are allowed in IRIs");
            }
            read_uchar(s, pos, out);
            continue;
        }
        const auto uc = static_cast<unsigned char>(c);
        if (uc <= 0x20 || c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' || c == '`') {
            fail(pos, std::string("character not allowed in IRI"));
        }
        out.push_back(c);
        ++pos;
    }
    return out;
}

std::string read_quoted(std::string_view s, std::size_t& pos) {
    if (pos >= s.size() || (s[pos] != '"' && s[pos] != '\'')) {
        fail(pos, "expected a quoted string");
    }
    const char quote = s[pos];
    const std::size_t start = pos++;
    std::string out;
    while (true) {
        if (pos >= s.size()) {
            fail(start, "unterminated string");
        }
        const char c = s[pos];
        if (c == quote) {
            ++pos;
            break;
        }
        if (c == '\n' || c == '\r') {
            fail(pos, "raw line break inside string");
        }
        if (c == '\\') {
            ++pos;
            if (pos >= s.size()) {
                fail(pos - 1, "dangling escape");
            }
            switch (s[pos]) {
                case 't': out.push_back('\t'); break;
                case 'b': out.push_back('\b'); break;
                case 'n': out.push_back('\n'); break;
                case 'r': out.push_back('\r'); break;
                case 'f': out.push_back('\f'); break;
                case '"': out.push_back('"'); break;
                case '\'': out.push_back('\''); break;
                case '\\': out.push_back('\\'); break;
                case 'u':
                case 'U':
                    read_uchar(s, pos, out);
                    continue;
                default:
                    fail(pos - 1, "unknown escape sequence");
            }
            ++pos;
            continue;
        }
        out.push_back(c);
        ++pos;
    }
    return out;
}

std::string read_langtag(std::string_view s, std::size_t& pos) {
    const std::size_t start = pos;
    auto alpha_run = [&](bool allow_digits) {
        const std::size_t begin = pos;
        while (pos < s.size() && (std::isalpha(static_cast<unsigned char>(s[pos])) != 0 ||
                                  (allow_digits && std::isdigit(static_cast<unsigned char>(s[pos])) != 0))) {
            ++pos;
        }
        return pos > begin;
    };
    if (!alpha_run(false)) {
        fail(start, "expected a language tag");
    }
    while (pos < s.size() && s[pos] == '-') {
        ++pos;
        if (!alpha_run(true)) {
            fail(pos, "bad language subtag");
        }
    }
    return std::string(s.substr(start, pos - start));
}

std::string read_blank_label(std::string_view s, std::size_t& pos) {
    auto name_char = [](unsigned char c) {
        return std::isalnum(c) != 0 || c == '_' || c == '-' || c >= 0x80;
    };
    const std::size_t start = pos;
    if (pos >= s.size() || !name_char(static_cast<unsigned char>(s[pos])) || s[pos] == '-') {
        fail(pos, "expected a blank node label");
    }
    ++pos;
    while (pos < s.size() && (name_char(static_cast<unsigned char>(s[pos])) || s[pos] == '.')) {
        ++pos;
    }
    while (pos > start + 1 && s[pos - 1] == '.') {
        --pos;
    }
    return std::string(s.substr(start, pos - start));
}

Term read_term(std::string_view s, std::size_t& pos) {
    if (pos >= s.size()) {
        fail(pos, "expected a term");
    }
    if (s[pos] == '<') {
        return Term::iri(read_iriref(s, pos));
    }
    if (s[pos] == '_') {
        if (pos + 1 >= s.size() || s[pos + 1] != ':') {
            fail(pos, "expected '_:'");
        }
        pos += 2;
        return Term::blank(read_blank_label(s, pos));
    }
    if (s[pos] == '"') {
        std::string lexical = read_quoted(s, pos);
        if (pos < s.size() && s[pos] == '@') {
            ++pos;
            return Term::lang_literal(std::move(lexical), read_langtag(s, pos));
        }
        if (pos + 1 < s.size() && s[pos] == '^' && s[pos + 1] == '^') {
            pos += 2;
            return Term::literal(std::move(lexical), read_iriref(s, pos));
        }
        return Term::literal(std::move(lexical));
    }
    fail(pos, "expected '<', '_:' or '\"'");
}

std::string escape_iri(std::string_view iri) {
    std::string out;
    out.reserve(iri.size());
    for (const char c : iri) {
        const auto uc = static_cast<unsigned char>(c);
        if (uc <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
            c == '`' || c == '\\') {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04X", uc);
            out += buf;
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::string escape_string(std::string_view text) {
    std::string out;
    out.reserve(text.size() + 2);
    for (const char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            default: {
                const auto uc = static_cast<unsigned char>(c);
                if (uc < 0x20 || uc == 0x7F) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04X", uc);
                    out += buf;
                } else {
                    out.push_back(c);
                }
            }
        }
    }
    return out;
}

}  // namespace syntax

Term parse_term(std::string_view text) {
    std::size_t pos = 0;
    try {
        syntax::skip_space(text, pos);
        Term t = syntax::read_term(text, pos);
        syntax::skip_space(text, pos);
        if (pos != text.size()) {
            throw syntax::Failure{pos, "unexpected trailing input"};
        }
        if (!utf8::is_valid(text)) {
            throw syntax::Failure{0, "invalid UTF-8"};
        }
        return t;
    } catch (const syntax::Failure& f) {
        throw Error(ErrorCode::ParseError,
                    "bad term '" + std::string(text) + "' at offset " + std::to_string(f.offset) + ": " + f.message);
    }
}

Triple parse_triple(std::string_view text) {
    std::size_t pos = 0;
    try {
        using namespace syntax;
        skip_space(text, pos);
        Term s = read_term(text, pos);
        skip_space(text, pos);
        Term p = read_term(text, pos);
        skip_space(text, pos);
        Term o = read_term(text, pos);
        skip_space(text, pos);
        if (pos >= text.size() || text[pos] != '.') {
            throw Failure{pos, "expected '.'"};
        }
        ++pos;
        skip_space(text, pos);
        if (pos != text.size() && text[pos] != '#') {
            throw Failure{pos, "unexpected trailing input"};
        }
        return Triple{std::move(s), std::move(p), std::move(o)};
    } catch (const syntax::Failure& f) {
        throw Error(ErrorCode::ParseError, "offset " + std::to_string(f.offset) + ": " + f.message);
    }
}

}  // namespace datacat::graph
