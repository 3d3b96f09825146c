#include "support.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace testsupport {

using datacat::graph::BgpQuery;
using datacat::graph::PatternTerm;
using datacat::graph::Term;
using datacat::graph::Triple;
using datacat::graph::TriplePattern;
using datacat::graph::Variable;

TempDir::TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "datacat-test-XXXXXX").string();
    if (::mkdtemp(tmpl.data()) == nullptr) {
        throw std::runtime_error("mkdtemp failed");
    }
    path_ = tmpl;
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path source_dir() { return fs::path(DATACAT_TESTS_DIR); }

// ---------------------------------------------------------------------------

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
    return items[uniform(rng, 0, items.size() - 1)];
}

constexpr std::size_t kMaxFragmentIndex = 999'999'999'999ULL;

std::size_t random_index(Rng& rng) {
    switch (uniform(rng, 0, 3)) {
        case 0: return uniform(rng, 1, 9);
        case 1: return uniform(rng, 1, 1000);
        case 2: return uniform(rng, 1, 10'000'000);
        default: return uniform(rng, 1, kMaxFragmentIndex);
    }
}

// End text for a range starting at `start`; empty means "same as start".
std::string random_end(Rng& rng, std::size_t start) {
    switch (uniform(rng, 0, 2)) {
        case 0: return "";
        case 1: return "*";
        default: {
            if (start == kMaxFragmentIndex) {
                return "";
            }
            const std::size_t room = kMaxFragmentIndex - start;
            const std::size_t offset = chance(rng, 0.7) ? uniform(rng, 1, std::min<std::size_t>(room, 50))
                                                        : uniform(rng, 1, room);
            return std::to_string(start + offset);
        }
    }
}

}  // namespace

std::string random_fragment(Rng& rng) {
    const std::size_t kind = uniform(rng, 0, 3);
    if (kind < 3) {
        static const char* const names[] = {"row=", "col=", "line="};
        const std::size_t start = random_index(rng);
        const std::string end = random_end(rng, start);
        return names[kind] + std::to_string(start) + (end.empty() ? "" : "-" + end);
    }
    const std::size_t r = random_index(rng);
    const std::size_t c = random_index(rng);
    std::string out = "cell=" + std::to_string(r) + "," + std::to_string(c);
    if (chance(rng, 0.3)) {
        return out;
    }
    std::string er = random_end(rng, r);
    std::string ec = random_end(rng, c);
    if (er.empty() && ec.empty()) {
        return out;  // "r,c-r,c" is written as "r,c"
    }
    if (er.empty()) er = std::to_string(r);
    if (ec.empty()) ec = std::to_string(c);
    return out + "-" + er + "," + ec;
}

std::vector<std::string> invalid_fragments() {
    std::vector<std::string> out = {
        "", "=", "row", "row=", "=1", "row=a", "row=1-", "row=-1", "row=1--2", "row=1-2-3", "row=*", "row=*-2",
        "row=*-*", "row=0", "row=0-3", "row=3-2", "row=01", "row=1-02", "row= 1", "row=1 ", " row=1", "ROW=1",
        "Row=1", "rows=1", "r=1", "col=", "col=0", "col=5-4", "col=x", "col=*-*", "col=-", "cell=", "cell=1",
        "cell=1,", "cell=,1", "cell=,", "cell=1,2-", "cell=1,2-3", "cell=1,2-3,", "cell=1,2-,3", "cell=0,1",
        "cell=1,0", "cell=0,0", "cell=2,2-1,3", "cell=2,2-3,1", "cell=*,1", "cell=1,*", "cell=*,*", "cell=1;2",
        "cell=1,2,3", "cell=1,2-3,4-5", "cell=1,2-3,4,5", "line=", "line=0", "line=2-1", "line=*", "line=a",
        "row=1;col=2", "row=1&col=2", "row=1,2", "col=1,2", "line=1,2", "row=+1", "row=1.0", "row=1e3",
        "row=\xd9\xa1", "row=\xef\xbc\x91", "row=1000000000000", "row=1-1000000000000",
        "row=99999999999999999999999", "row=18446744073709551616", "cell=1000000000000,1",
        "cell=1,1000000000000", "cell=1,1-1000000000000,2", "line=1000000000000", "row=0x10", "#row=1", "row=1#",
        "row=%31", "row=1-*-*", "cell=1,1-*", "cell=1,1-*,", "cell=1,1-,*", "char=1", "t=1", "row==1",
        "row=1 -2", "row=1- 2", "cell=1 ,2", "cell=1, 2", "row=\t1", "line=1-0", "col=00", "cell=01,1",
        "cell=1,01", "cell=1,1-01,2", "cell=1,1-2,02", "line=007", "row=1\n", "row=\xff", "cell=1,2-*,0",
        "cell=3,3-2,*", "cell=3,3-*,2", "line=*-3", "col=2-1", "col=*", "row=-", "cell=-1,1", "cell=1,-1",
        "row=1-0", "col=1-0", "cell=1,1-0,1", "cell=1,1-1,0", "row=1_000", "row=1,000",
    };
    // Systematic families over each one-dimensional keyword.
    for (const std::string kw : {"row=", "col=", "line="}) {
        for (int d = 1; d <= 9; ++d) {
            out.push_back(kw + "0" + std::to_string(d));                  // leading zero
            out.push_back(kw + "1-0" + std::to_string(d));                // leading zero in end
            out.push_back(kw + std::to_string(d + 1) + "-" + std::to_string(d));  // inverted
        }
        out.push_back(kw + "x");
        out.push_back(kw + "1x");
        out.push_back(kw + "1-x");
    }
    for (int d = 2; d <= 6; ++d) {
        const std::string k = std::to_string(d);
        const std::string km1 = std::to_string(d - 1);
        out.push_back("cell=" + k + ",1-" + km1 + ",1");
        out.push_back("cell=1," + k + "-1," + km1);
        out.push_back("cell=*," + k);
        out.push_back("cell=" + k + ",*");
        out.push_back("cell=0" + k + "," + k);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string random_value(Rng& rng) {
    static const std::vector<std::string> tokens = {
        "a", "b", "red", "blue", "42", "-7", "3.14", "\xc3\x9c" "n\xc3\xaf" "c\xc3\xb6" "de", "\xe6\x97\xa5\xe6\x9c\xac",
        "x,y", "say \"hi\"", "multi\nline", "cr\r\nlf", "tab\there", "\xf0\x9f\x9a\x97", "Car", "car", " padded ",
    };
    static const std::vector<std::string> blanks = {
        " ", "  ", "\t", "\xc2\xa0", "\xe3\x80\x80", " \xe2\x80\x83 ", "\xe2\x80\xa8", "\xc2\x85",
    };
    static const std::vector<std::string> alphabet = {
        "a", "b", "c", "x", "y", "z", "0", "1", "9", " ", "-", "\"", ",", "\xc3\xa9", "\xce\xbb", "\xe2\x82\xac",
        "\xf0\x9f\x98\x80",
    };
    const std::size_t k = uniform(rng, 0, 9);
    if (k == 0) return "";
    if (k == 1) return pick(rng, blanks);
    if (k <= 5) return pick(rng, tokens);
    std::string s;
    const std::size_t len = uniform(rng, 1, 12);
    for (std::size_t i = 0; i < len; ++i) {
        s += pick(rng, alphabet);
    }
    return s;
}

Records random_records(Rng& rng, std::size_t rows, std::size_t cols) {
    // Each column gets a pool; small pools give repeated values, large pools
    // exercise the histogram cap.
    std::vector<std::vector<std::string>> pools(cols);
    for (auto& pool : pools) {
        const std::size_t size = chance(rng, 0.5) ? uniform(rng, 1, 8) : uniform(rng, 50, 2500);
        pool.reserve(size);
        for (std::size_t i = 0; i < size; ++i) {
            pool.push_back(random_value(rng) + (size > 20 ? std::to_string(i) : ""));
        }
    }
    const bool ragged = chance(rng, 0.3);
    Records records(rows);
    for (auto& record : records) {
        const std::size_t width = ragged && chance(rng, 0.2) ? uniform(rng, 1, cols) : cols;
        record.reserve(width);
        for (std::size_t c = 0; c < width; ++c) {
            record.push_back(pick(rng, pools[c]));
        }
    }
    return records;
}

std::string to_csv(const Records& records, Rng& rng, char delimiter) {
    const std::string eol = chance(rng, 0.5) ? "\r\n" : "\n";
    std::string out;
    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto& record = records[r];
        for (std::size_t c = 0; c < record.size(); ++c) {
            if (c > 0) out += delimiter;
            const std::string& v = record[c];
            const bool needs = v.find_first_of(std::string("\"\r\n") + delimiter) != std::string::npos;
            // A lone empty field must be quoted or the line reads as blank.
            const bool lone_empty = record.size() == 1 && v.empty();
            if (needs || lone_empty || chance(rng, 0.05)) {
                out += '"';
                for (const char ch : v) {
                    if (ch == '"') out += '"';
                    out += ch;
                }
                out += '"';
            } else {
                out += v;
            }
        }
        if (r + 1 < records.size() || chance(rng, 0.8)) {
            out += eol;
        }
    }
    return out;
}

std::vector<Triple> random_triples(Rng& rng, std::size_t count) {
    static const std::vector<Term> subjects = [] {
        std::vector<Term> v;
        for (int i = 0; i < 24; ++i) v.push_back(Term::iri("http://example.org/s" + std::to_string(i)));
        v.push_back(Term::iri("http://localhost:8080/res/t.csv#cell=1,8"));
        v.push_back(Term::iri("http://example.org/caf\xc3\xa9"));
        for (int i = 0; i < 4; ++i) v.push_back(Term::blank("b" + std::to_string(i)));
        return v;
    }();
    static const std::vector<Term> predicates = [] {
        std::vector<Term> v;
        for (int i = 0; i < 6; ++i) v.push_back(Term::iri("http://example.org/p" + std::to_string(i)));
        v.push_back(Term::iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type"));
        return v;
    }();
    static const std::vector<Term> literals = {
        Term::literal("plain"),
        Term::literal(""),
        Term::literal("quote \" backslash \\ newline \n tab \t cr \r"),
        Term::literal("\xe6\x97\xa5\xe6\x9c\xac\xe8\xaa\x9e \xf0\x9f\x9a\x97"),
        Term::literal("\x01\x7f control"),
        Term::integer(0),
        Term::integer(1),
        Term::integer(-12),
        Term::literal("3.500000", std::string(datacat::graph::kXsdDecimal)),
        Term::literal("2024-01-01", "http://www.w3.org/2001/XMLSchema#date"),
        Term::lang_literal("Auto", "de"),
        Term::lang_literal("car", "en-GB"),
    };
    std::vector<Triple> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Term s = pick(rng, subjects);
        Term p = pick(rng, predicates);
        Term o = chance(rng, 0.5) ? pick(rng, subjects) : pick(rng, literals);
        out.push_back(Triple{std::move(s), std::move(p), std::move(o)});
    }
    return out;
}

BgpQuery random_query(Rng& rng, const std::vector<Triple>& triples, std::size_t max_patterns) {
    static const std::vector<std::string> names = {"a", "b", "c", "d", "e"};
    static const Term fallback = Term::iri("http://example.org/p0");
    BgpQuery q;
    std::vector<std::string> used;
    auto fresh_or_used = [&](bool must_reuse) -> Variable {
        if ((must_reuse || chance(rng, 0.5)) && !used.empty()) {
            return Variable{pick(rng, used)};
        }
        const std::string& name = pick(rng, names);
        if (std::find(used.begin(), used.end(), name) == used.end()) {
            used.push_back(name);
        }
        return Variable{name};
    };
    const std::size_t n = uniform(rng, 1, max_patterns);
    for (std::size_t i = 0; i < n; ++i) {
        const Triple* seed = triples.empty() ? nullptr : &pick(rng, triples);
        auto ground = [&](int pos) -> Term {
            if (!seed) return fallback;
            return pos == 0 ? seed->subject : pos == 1 ? seed->predicate : seed->object;
        };
        // Which of subject/object carries the join variable for later patterns.
        const int link = chance(rng, 0.5) ? 0 : 2;
        TriplePattern tp{ground(0), ground(1), ground(2)};
        PatternTerm* slots[3] = {&tp.subject, &tp.predicate, &tp.object};
        bool has_ground = false;
        for (int pos = 0; pos < 3; ++pos) {
            const bool make_var = pos == link || (pos == 1 ? chance(rng, 0.25) : chance(rng, 0.5));
            if (make_var) {
                *slots[pos] = fresh_or_used(i > 0 && pos == link);
            } else {
                has_ground = true;
            }
        }
        if (!has_ground) {
            tp.predicate = ground(1);
        }
        q.patterns.push_back(std::move(tp));
    }
    // A forced ground predicate may have replaced a variable; select only
    // variables that still occur.
    std::vector<std::string> present;
    for (const auto& tp : q.patterns) {
        for (const PatternTerm* slot : {&tp.subject, &tp.predicate, &tp.object}) {
            const auto* v = std::get_if<Variable>(slot);
            if (v && std::find(present.begin(), present.end(), v->name) == present.end()) present.push_back(v->name);
        }
    }
    used = std::move(present);
    std::vector<std::string> selected;
    for (const auto& v : used) {
        if (chance(rng, 0.6)) selected.push_back(v);
    }
    if (selected.empty()) selected.push_back(pick(rng, used));
    std::shuffle(selected.begin(), selected.end(), rng);
    q.selected = std::move(selected);
    return q;
}

// ---------------------------------------------------------------------------

namespace oracle {

std::map<std::string, std::size_t> enumerate_column_labels(std::size_t count) {
    std::map<std::string, std::size_t> out;
    std::string label = "A";
    for (std::size_t index = 1; index <= count; ++index) {
        out.emplace(label, index);
        // Increment like an odometer whose digits run A..Z with no zero.
        std::size_t i = label.size();
        while (i > 0 && label[i - 1] == 'Z') {
            label[i - 1] = 'A';
            --i;
        }
        if (i == 0) {
            label.insert(label.begin(), 'A');
        } else {
            ++label[i - 1];
        }
    }
    return out;
}

namespace {

std::vector<char32_t> decode(std::string_view s) {
    std::vector<char32_t> cps;
    for (std::size_t i = 0; i < s.size();) {
        const auto b = static_cast<unsigned char>(s[i]);
        int len = b < 0x80 ? 1 : b < 0xE0 ? 2 : b < 0xF0 ? 3 : 4;
        char32_t cp = len == 1 ? b : len == 2 ? (b & 0x1F) : len == 3 ? (b & 0x0F) : (b & 0x07);
        for (int k = 1; k < len; ++k) {
            cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
        }
        cps.push_back(cp);
        i += len;
    }
    return cps;
}

bool white_space(char32_t c) {
    static const std::set<char32_t> ws = {0x09,   0x0A,   0x0B,   0x0C,   0x0D,   0x20,   0x85,   0xA0,
                                          0x1680, 0x2000, 0x2001, 0x2002, 0x2003, 0x2004, 0x2005, 0x2006,
                                          0x2007, 0x2008, 0x2009, 0x200A, 0x2028, 0x2029, 0x202F, 0x205F,
                                          0x3000};
    return ws.count(c) > 0;
}

}  // namespace

std::size_t code_points(std::string_view utf8) { return decode(utf8).size(); }

bool is_blank(std::string_view utf8) {
    const auto cps = decode(utf8);
    return !cps.empty() && std::all_of(cps.begin(), cps.end(), white_space);
}

Profile profile(const std::vector<std::string>& values, std::size_t cap) {
    Profile p;
    std::map<std::string, std::size_t> freq;
    long double mean = 0;
    long double m2 = 0;
    for (const auto& v : values) {
        ++p.total;
        ++freq[v];
        if (v.empty()) {
            ++p.empty;
        } else if (is_blank(v)) {
            ++p.blank;
        }
        const std::size_t len = code_points(v);
        if (p.total == 1) {
            p.min_length = p.max_length = len;
        } else {
            p.min_length = std::min(p.min_length, len);
            p.max_length = std::max(p.max_length, len);
        }
        // Welford's running update.
        const long double x = static_cast<long double>(len);
        const long double delta = x - mean;
        mean += delta / static_cast<long double>(p.total);
        m2 += delta * (x - mean);
    }
    p.distinct = freq.size();
    if (p.total > 0) {
        p.mean = mean;
        p.std_dev = std::sqrt(m2 / static_cast<long double>(p.total));
    }
    std::vector<std::pair<std::string, std::size_t>> entries(freq.begin(), freq.end());
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (entries.size() > cap) {
        std::size_t rest = 0;
        for (std::size_t i = cap; i < entries.size(); ++i) rest += entries[i].second;
        entries.resize(cap);
        p.histogram.overflow = rest;
    }
    p.histogram.entries = std::move(entries);
    return p;
}

std::vector<std::string> column_values(const Records& records, std::size_t col, bool header_row) {
    std::vector<std::string> out;
    for (std::size_t r = header_row ? 1 : 0; r < records.size(); ++r) {
        out.push_back(col - 1 < records[r].size() ? records[r][col - 1] : std::string());
    }
    return out;
}

std::optional<std::set<Row>> nested_loop_join(const std::vector<Triple>& triples, const BgpQuery& query,
                                              std::size_t limit) {
    using Binding = std::map<std::string, Term>;
    std::vector<Binding> current(1);
    for (const auto& pattern : query.patterns) {
        std::vector<Binding> next;
        for (const auto& binding : current) {
            for (const auto& t : triples) {
                const PatternTerm* slots[3] = {&pattern.subject, &pattern.predicate, &pattern.object};
                const Term* values[3] = {&t.subject, &t.predicate, &t.object};
                // Check every position against the binding and against
                // earlier positions of this pattern before copying anything.
                bool ok = true;
                for (int k = 0; k < 3 && ok; ++k) {
                    if (const auto* v = std::get_if<Variable>(slots[k])) {
                        const auto it = binding.find(v->name);
                        if (it != binding.end()) {
                            ok = it->second == *values[k];
                        }
                        for (int j = 0; j < k && ok; ++j) {
                            const auto* w = std::get_if<Variable>(slots[j]);
                            if (w && w->name == v->name) ok = *values[j] == *values[k];
                        }
                    } else {
                        ok = std::get<Term>(*slots[k]) == *values[k];
                    }
                }
                if (!ok) continue;
                Binding b = binding;
                for (int k = 0; k < 3; ++k) {
                    if (const auto* v = std::get_if<Variable>(slots[k])) b.emplace(v->name, *values[k]);
                }
                next.push_back(std::move(b));
                if (next.size() > limit) return std::nullopt;
            }
        }
        current = std::move(next);
    }
    std::set<Row> rows;
    for (const auto& b : current) {
        Row row;
        for (const auto& name : query.selected) {
            row.push_back(b.at(name).to_ntriples());
        }
        rows.insert(std::move(row));
    }
    return rows;
}

}  // namespace oracle

std::set<oracle::Row> as_rows(const datacat::graph::QueryResult& result) {
    std::set<oracle::Row> rows;
    for (const auto& b : result.rows) {
        oracle::Row row;
        for (const auto& name : result.variables) {
            row.push_back(b.at(name).to_ntriples());
        }
        rows.insert(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------

LiveServer::LiveServer(std::shared_ptr<datacat::resources::ResourceRegistry> registry,
                       datacat::server::ServiceConfig config)
    : service_(std::move(registry), std::move(config)), http_(service_) {
    service_.load_graph();
    port_ = http_.bind_to_any_port("127.0.0.1");
    if (port_ <= 0) {
        throw std::runtime_error("cannot bind a loopback port");
    }
    thread_ = std::thread([this] { http_.listen_after_bind(); });
    http_.wait_until_ready();
}

LiveServer::~LiveServer() {
    http_.stop();
    if (thread_.joinable()) thread_.join();
}

std::string url_encode(std::string_view value) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (const char ch : value) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
            out += ch;
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 15];
        }
    }
    return out;
}

}  // namespace testsupport
