#include <algorithm>
#include <cctype>
#include <limits>
#include <set>

#include "datacat/error.hpp"
#include "datacat/graphstore.hpp"
#include "datacat/vocab.hpp"

namespace datacat::graph {

namespace {

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-' ||
           static_cast<unsigned char>(c) >= 0x80;
}

class QueryParser {
public:
    QueryParser(std::string_view text, const PrefixMap& prefixes) : text_(text), prefixes_(prefixes) {}

    BgpQuery parse() {
        try {
            return parse_query();
        } catch (const syntax::Failure& f) {
            fail_at(f.offset, f.message);
        }
    }

private:
    BgpQuery parse_query() {
        BgpQuery query;
        space();
        while (keyword("PREFIX")) {
            space();
            const std::size_t start = pos_;
            while (pos_ < text_.size() && text_[pos_] != ':' && is_name_char(text_[pos_])) {
                ++pos_;
            }
            std::string name(text_.substr(start, pos_ - start));
            expect(':');
            space();
            prefixes_[name] = syntax::read_iriref(text_, pos_);
            space();
        }
        if (!keyword("SELECT")) {
            fail_at(pos_, "expected SELECT");
        }
        space();
        bool star = false;
        if (peek() == '*') {
            ++pos_;
            star = true;
        } else {
            while (peek() == '?' || peek() == '$') {
                query.selected.push_back(variable_name());
                space();
            }
            if (query.selected.empty()) {
                fail_at(pos_, "expected '*' or at least one variable after SELECT");
            }
        }
        space();
        keyword("WHERE");
        space();
        expect('{');
        while (true) {
            space();
            if (peek() == '}') {
                ++pos_;
                break;
            }
            TriplePattern pattern{term(false), (space(), term(true)), (space(), term(false))};
            query.patterns.push_back(std::move(pattern));
            space();
            if (peek() == '.') {
                ++pos_;
            } else if (peek() != '}') {
                fail_at(pos_, "expected '.' or '}'");
            }
        }
        space();
        if (pos_ != text_.size()) {
            fail_at(pos_, "unexpected input after '}'");
        }
        if (star) {
            for (const auto& p : query.patterns) {
                for (const PatternTerm* slot : {&p.subject, &p.predicate, &p.object}) {
                    const auto* v = std::get_if<Variable>(slot);
                    if (v != nullptr && v->name.rfind("_:", 0) != 0 &&
                        std::find(query.selected.begin(), query.selected.end(), v->name) == query.selected.end()) {
                        query.selected.push_back(v->name);
                    }
                }
            }
        }
        return query;
    }

    PatternTerm term(bool predicate_position) {
        const char c = peek();
        if (c == '?' || c == '$') {
            return Variable{variable_name()};
        }
        if (c == '<') {
            return Term::iri(syntax::read_iriref(text_, pos_));
        }
        if (c == '"' || c == '\'') {
            std::string lexical = syntax::read_quoted(text_, pos_);
            if (peek() == '@') {
                ++pos_;
                return Term::lang_literal(std::move(lexical), syntax::read_langtag(text_, pos_));
            }
            if (text_.substr(pos_, 2) == "^^") {
                pos_ += 2;
                std::string datatype = peek() == '<' ? syntax::read_iriref(text_, pos_) : prefixed_name();
                return Term::literal(std::move(lexical), std::move(datatype));
            }
            return Term::literal(std::move(lexical));
        }
        if (c == '_' && text_.substr(pos_, 2) == "_:") {
            pos_ += 2;
            return Variable{"_:" + syntax::read_blank_label(text_, pos_)};
        }
        if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '+' || c == '-') {
            return number();
        }
        if (predicate_position && c == 'a' && (pos_ + 1 >= text_.size() || !is_name_char(text_[pos_ + 1])) &&
            text_.substr(pos_, 2) != "a:") {
            ++pos_;
            return Term::iri(std::string(vocab::kRdf) + "type");
        }
        if (keyword("true")) {
            return Term::literal("true", std::string(vocab::kXsd) + "boolean");
        }
        if (keyword("false")) {
            return Term::literal("false", std::string(vocab::kXsd) + "boolean");
        }
        return Term::iri(prefixed_name());
    }

    Term number() {
        const std::size_t start = pos_;
        if (peek() == '+' || peek() == '-') {
            ++pos_;
        }
        auto digits = [&] {
            const std::size_t b = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])) != 0) {
                ++pos_;
            }
            return pos_ > b;
        };
        const bool int_part = digits();
        bool decimal = false;
        if (peek() == '.' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
            ++pos_;
            digits();
            decimal = true;
        } else if (!int_part) {
            fail_at(start, "expected a number");
        }
        std::string lexical(text_.substr(start, pos_ - start));
        if (lexical.front() == '+') {
            lexical.erase(0, 1);
        }
        return Term::literal(std::move(lexical), std::string(decimal ? graph::kXsdDecimal : graph::kXsdInteger));
    }

    std::string prefixed_name() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ':' && is_name_char(text_[pos_])) {
            ++pos_;
        }
        if (peek() != ':') {
            fail_at(start, "expected a term");
        }
        const std::string prefix(text_.substr(start, pos_ - start));
        ++pos_;
        const std::size_t local_start = pos_;
        while (pos_ < text_.size() && (is_name_char(text_[pos_]) || text_[pos_] == '.')) {
            ++pos_;
        }
        while (pos_ > local_start && text_[pos_ - 1] == '.') {
            --pos_;
        }
        const auto it = prefixes_.find(prefix);
        if (it == prefixes_.end()) {
            fail_at(start, "unknown prefix '" + prefix + ":'");
        }
        return it->second + std::string(text_.substr(local_start, pos_ - local_start));
    }

    std::string variable_name() {
        const std::size_t start = pos_;
        ++pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) != 0 || text_[pos_] == '_')) {
            ++pos_;
        }
        if (pos_ == start + 1) {
            fail_at(start, "empty variable name");
        }
        return std::string(text_.substr(start + 1, pos_ - start - 1));
    }

    bool keyword(std::string_view word) {
        if (text_.size() - pos_ < word.size()) {
            return false;
        }
        for (std::size_t i = 0; i < word.size(); ++i) {
            if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) !=
                std::toupper(static_cast<unsigned char>(word[i]))) {
                return false;
            }
        }
        const std::size_t after = pos_ + word.size();
        if (after < text_.size() && (is_name_char(text_[after]) || text_[after] == ':')) {
            return false;
        }
        pos_ = after;
        return true;
    }

    void space() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void expect(char c) {
        if (peek() != c) {
            fail_at(pos_, std::string("expected '") + c + "'");
        }
        ++pos_;
    }

    [[noreturn]] void fail_at(std::size_t offset, const std::string& message) const {
        offset = std::min(offset, text_.size());
        std::size_t line = 1;
        std::size_t line_start = 0;
        for (std::size_t i = 0; i < offset; ++i) {
            if (text_[i] == '\n') {
                ++line;
                line_start = i + 1;
            }
        }
        throw ParseError(line, "column " + std::to_string(offset - line_start + 1) + ": " + message);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    PrefixMap prefixes_;
};

constexpr TermId kUnbound = std::numeric_limits<TermId>::max();

// A pattern position after compilation: either a ground id or a variable slot.
struct Slot {
    bool is_var = false;
    TermId id = 0;
    std::size_t var = 0;
};

struct CompiledPattern {
    std::array<Slot, 3> slots;
};

}  // namespace

BgpQuery parse_query(std::string_view text, const PrefixMap& prefixes) {
    return QueryParser(text, prefixes).parse();
}

QueryResult query_bgp(const GraphStore& store, const BgpQuery& query) {
    if (query.patterns.empty()) {
        throw Error(ErrorCode::UnboundSelectedVariable, "query has no patterns, so no variable can bind");
    }
    std::vector<std::string> var_names;
    auto var_index = [&](const std::string& name) {
        const auto it = std::find(var_names.begin(), var_names.end(), name);
        if (it != var_names.end()) {
            return static_cast<std::size_t>(it - var_names.begin());
        }
        var_names.push_back(name);
        return var_names.size() - 1;
    };

    QueryResult result{query.selected, {}};
    bool satisfiable = true;
    std::vector<CompiledPattern> compiled;
    for (const auto& p : query.patterns) {
        CompiledPattern cp;
        const std::array<const PatternTerm*, 3> terms{&p.subject, &p.predicate, &p.object};
        for (std::size_t i = 0; i < 3; ++i) {
            if (const auto* v = std::get_if<Variable>(terms[i])) {
                cp.slots[i] = Slot{true, 0, var_index(v->name)};
            } else if (const auto id = store.lookup(std::get<Term>(*terms[i]))) {
                cp.slots[i] = Slot{false, *id, 0};
            } else {
                satisfiable = false;
            }
        }
        compiled.push_back(cp);
    }

    std::vector<std::size_t> projection;
    for (const auto& name : query.selected) {
        const auto it = std::find(var_names.begin(), var_names.end(), name);
        if (it == var_names.end()) {
            throw Error(ErrorCode::UnboundSelectedVariable, "?" + name + " does not occur in any pattern");
        }
        projection.push_back(static_cast<std::size_t>(it - var_names.begin()));
    }
    if (!satisfiable) {
        return result;
    }

    using Solution = std::vector<TermId>;
    std::vector<Solution> solutions{Solution(var_names.size(), kUnbound)};
    std::vector<bool> bound(var_names.size(), false);
    std::vector<bool> used(compiled.size(), false);

    for (std::size_t step = 0; step < compiled.size() && !solutions.empty(); ++step) {
        // Next pattern: the one with the most positions already fixed.
        std::size_t best = compiled.size();
        int best_score = -1;
        for (std::size_t i = 0; i < compiled.size(); ++i) {
            if (used[i]) {
                continue;
            }
            int score = 0;
            for (const auto& slot : compiled[i].slots) {
                score += (!slot.is_var || bound[slot.var]) ? 1 : 0;
            }
            if (score > best_score) {
                best_score = score;
                best = i;
            }
        }
        used[best] = true;
        const auto& slots = compiled[best].slots;

        std::vector<Solution> next;
        for (const auto& sol : solutions) {
            std::array<std::optional<TermId>, 3> ground;
            for (std::size_t i = 0; i < 3; ++i) {
                if (!slots[i].is_var) {
                    ground[i] = slots[i].id;
                } else if (sol[slots[i].var] != kUnbound) {
                    ground[i] = sol[slots[i].var];
                }
            }
            store.scan(ground[0], ground[1], ground[2], [&](const IdTriple& ids) {
                Solution extended = sol;
                for (std::size_t i = 0; i < 3; ++i) {
                    if (!slots[i].is_var) {
                        continue;
                    }
                    TermId& cell = extended[slots[i].var];
                    if (cell == kUnbound) {
                        cell = ids[i];
                    } else if (cell != ids[i]) {
                        return;
                    }
                }
                next.push_back(std::move(extended));
            });
        }
        solutions = std::move(next);
        for (const auto& slot : slots) {
            if (slot.is_var) {
                bound[slot.var] = true;
            }
        }
    }

    std::set<std::vector<TermId>> projected;
    for (const auto& sol : solutions) {
        std::vector<TermId> row;
        row.reserve(projection.size());
        for (const std::size_t v : projection) {
            row.push_back(sol[v]);
        }
        projected.insert(std::move(row));
    }

    std::vector<std::pair<std::vector<std::string>, BindingSet>> keyed;
    keyed.reserve(projected.size());
    for (const auto& row : projected) {
        std::vector<std::string> key;
        BindingSet binding;
        for (std::size_t i = 0; i < row.size(); ++i) {
            const Term& t = store.term(row[i]);
            key.push_back(t.to_ntriples());
            binding.insert_or_assign(query.selected[i], t);
        }
        keyed.emplace_back(std::move(key), std::move(binding));
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    result.rows.reserve(keyed.size());
    for (auto& [key, binding] : keyed) {
        result.rows.push_back(std::move(binding));
    }
    return result;
}

}  // namespace datacat::graph
