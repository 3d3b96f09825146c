#include "datacat/graphstore.hpp"

#include <algorithm>
#include <tuple>

#include "datacat/error.hpp"
#include "datacat/utf8.hpp"

namespace datacat::graph {

namespace {

constexpr TermId kMinId = 0;
constexpr TermId kMaxId = ~TermId{0};

// Visits every key in `index` whose first one or two components match.
template <typename Fn>
void prefix_scan(const std::set<IdTriple>& index, TermId first, std::optional<TermId> second, Fn&& fn) {
    const IdTriple lo{first, second.value_or(kMinId), kMinId};
    const IdTriple hi{first, second.value_or(kMaxId), kMaxId};
    for (auto it = index.lower_bound(lo); it != index.end() && !(hi < *it); ++it) {
        fn(*it);
    }
}

}  // namespace

TermId GraphStore::intern(const Term& term) {
    if (const auto it = ids_.find(term); it != ids_.end()) {
        return it->second;
    }
    const auto id = static_cast<TermId>(terms_.size());
    terms_.push_back(term);
    ids_.emplace(term, id);
    return id;
}

std::optional<TermId> GraphStore::lookup(const Term& term) const {
    if (const auto it = ids_.find(term); it != ids_.end()) {
        return it->second;
    }
    return std::nullopt;
}

std::optional<IdTriple> GraphStore::lookup(const Triple& triple) const {
    const auto s = lookup(triple.subject);
    const auto p = lookup(triple.predicate);
    const auto o = lookup(triple.object);
    if (!s || !p || !o) {
        return std::nullopt;
    }
    return IdTriple{*s, *p, *o};
}

Triple GraphStore::materialize(const IdTriple& ids) const {
    return Triple{terms_[ids[0]], terms_[ids[1]], terms_[ids[2]]};
}

bool GraphStore::insert(const Triple& triple) {
    validate(triple);
    const IdTriple ids{intern(triple.subject), intern(triple.predicate), intern(triple.object)};
    if (!spo_.insert(ids).second) {
        return false;
    }
    pos_.insert({ids[1], ids[2], ids[0]});
    osp_.insert({ids[2], ids[0], ids[1]});
    return true;
}

bool GraphStore::remove(const Triple& triple) {
    const auto ids = lookup(triple);
    if (!ids || spo_.erase(*ids) == 0) {
        return false;
    }
    pos_.erase({(*ids)[1], (*ids)[2], (*ids)[0]});
    osp_.erase({(*ids)[2], (*ids)[0], (*ids)[1]});
    return true;
}

bool GraphStore::contains(const Triple& triple) const {
    const auto ids = lookup(triple);
    return ids && spo_.count(*ids) != 0;
}

void GraphStore::clear() {
    terms_.clear();
    ids_.clear();
    spo_.clear();
    pos_.clear();
    osp_.clear();
}

void GraphStore::scan(std::optional<TermId> s, std::optional<TermId> p, std::optional<TermId> o,
                      const std::function<void(const IdTriple&)>& visit) const {
    if (s && p && o) {
        const IdTriple key{*s, *p, *o};
        if (spo_.count(key) != 0) {
            visit(key);
        }
    } else if (s && o) {
        prefix_scan(osp_, *o, s, [&](const IdTriple& k) { visit({k[1], k[2], k[0]}); });
    } else if (s) {
        prefix_scan(spo_, *s, p, visit);
    } else if (p) {
        prefix_scan(pos_, *p, o, [&](const IdTriple& k) { visit({k[2], k[0], k[1]}); });
    } else if (o) {
        prefix_scan(osp_, *o, std::nullopt, [&](const IdTriple& k) { visit({k[1], k[2], k[0]}); });
    } else {
        for (const auto& k : spo_) {
            visit(k);
        }
    }
}

std::vector<Triple> GraphStore::match(const TriplePattern& pattern) const {
    std::array<std::optional<TermId>, 3> ground;
    std::array<const Variable*, 3> vars{};
    const std::array<const PatternTerm*, 3> slots{&pattern.subject, &pattern.predicate, &pattern.object};
    for (std::size_t i = 0; i < 3; ++i) {
        if (const auto* t = std::get_if<Term>(slots[i])) {
            ground[i] = lookup(*t);
            if (!ground[i]) {
                return {};
            }
        } else {
            vars[i] = &std::get<Variable>(*slots[i]);
        }
    }
    std::vector<Triple> out;
    scan(ground[0], ground[1], ground[2], [&](const IdTriple& ids) {
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = i + 1; j < 3; ++j) {
                if (vars[i] && vars[j] && vars[i]->name == vars[j]->name && ids[i] != ids[j]) {
                    return;
                }
            }
        }
        out.push_back(materialize(ids));
    });
    return out;
}

std::vector<Triple> GraphStore::triples() const {
    std::vector<Triple> out;
    out.reserve(spo_.size());
    for (const auto& ids : spo_) {
        out.push_back(materialize(ids));
    }
    return out;
}

bool GraphStore::same_triples(const GraphStore& other) const {
    if (size() != other.size()) {
        return false;
    }
    for (const auto& ids : spo_) {
        if (!other.contains(materialize(ids))) {
            return false;
        }
    }
    return true;
}

std::vector<Triple> match_pattern(const GraphStore& store, const TriplePattern& pattern) {
    return store.match(pattern);
}

std::string export_ntriples(const GraphStore& store) {
    using Line = std::tuple<std::string, std::string, std::string>;
    std::vector<Line> lines;
    lines.reserve(store.size());
    for (const auto& t : store.triples()) {
        lines.emplace_back(t.subject.to_ntriples(), t.predicate.to_ntriples(), t.object.to_ntriples());
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& [s, p, o] : lines) {
        out.append(s).append(" ").append(p).append(" ").append(o).append(" .\n");
    }
    return out;
}

std::size_t import_ntriples(GraphStore& store, std::string_view text) {
    if (const auto bad = utf8::find_invalid(text)) {
        const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + *bad, '\n'));
        throw ParseError(line, "invalid UTF-8");
    }
    std::vector<Triple> parsed;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        std::size_t pos = 0;
        syntax::skip_space(line, pos);
        if (pos == line.size() || line[pos] == '#') {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        try {
            Triple t = parse_triple(line);
            validate(t);
            parsed.push_back(std::move(t));
        } catch (const Error& e) {
            throw ParseError(line_no, e.what());
        }
        if (end == text.size()) {
            break;
        }
    }
    std::size_t added = 0;
    for (const auto& t : parsed) {
        added += store.insert(t) ? 1 : 0;
    }
    return added;
}

}  // namespace datacat::graph
