#include <doctest.h>

#include "datacat/error.hpp"
#include "datacat/graphstore.hpp"
#include "datacat/profiler.hpp"
#include "datacat/vocab.hpp"
#include "support.hpp"

using namespace datacat;
using namespace datacat::graph;
using testsupport::error_code_of;

namespace {

const vocab::Vocabulary kVocab("http://localhost:8080");

GraphStore profiled(const std::vector<std::pair<std::string, std::string>>& tables) {
    GraphStore s;
    for (const auto& [name, csv] : tables) {
        const resources::TableResource t("http://localhost:8080/res/" + name, name, resources::parse_csv(csv), true);
        for (const auto& p : profiler::profile_table(t)) {
            for (const auto& triple : profiler::profile_to_triples(p, kVocab)) s.insert(triple);
        }
    }
    return s;
}

QueryResult run(const GraphStore& s, std::string_view text) { return query_bgp(s, parse_query(text, kVocab.prefixes())); }

}  // namespace

TEST_CASE("one-distinct-value query finds the constant column") {
    const GraphStore s = profiled({{"f.csv", "a,b,k\n1,x,same\n2,y,same\n3,z,same\n"}});
    const auto r = run(s, "SELECT ?c WHERE {?c du:distinctCount \"1\"^^xsd:integer}");
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].at("c") == Term::iri("http://localhost:8080/res/f.csv#col=3"));
}

TEST_CASE("query syntax variants") {
    const GraphStore s = profiled({{"f.csv", "a,b\n1,1\n2,1\n"}});
    CHECK(run(s, "select ?c where { ?c du:distinctCount 1 . }").rows.size() == 1);
    CHECK(run(s, "PREFIX d: <http://localhost:8080/vocab#>\nSELECT ?c { ?c a d:Column }").rows.size() == 2);
    CHECK(run(s, "SELECT * WHERE { ?c du:columnIndex ?i . ?c du:emptyCount 0 }").variables ==
          std::vector<std::string>{"c", "i"});
    CHECK(run(s, "SELECT ?c WHERE { ?c du:histogramEntry _:e . _:e du:frequency 2 }").rows.size() == 1);
    CHECK(run(s, "SELECT ?c WHERE { ?c du:distinctCount 7 }").rows.empty());
}

TEST_CASE("query errors") {
    GraphStore s;
    CHECK(error_code_of([&] { run(s, "SELECT ?c WHERE { }"); }) == ErrorCode::UnboundSelectedVariable);
    CHECK(error_code_of([&] { run(s, "SELECT ?x WHERE { ?c du:distinctCount 1 }"); }) ==
          ErrorCode::UnboundSelectedVariable);
    CHECK(error_code_of([&] { run(s, "SELECT ?c WHERE { ?c du:distinctCount }"); }) == ErrorCode::ParseError);
    CHECK(error_code_of([&] { run(s, "SELECT ?c WHERE { ?c nope:x 1 }"); }) == ErrorCode::ParseError);
    CHECK(error_code_of([&] { run(s, "SELECT WHERE { ?c ?p ?o }"); }) == ErrorCode::ParseError);
    CHECK(error_code_of([&] { run(s, "SELECT ?c WHERE { ?c ?p ?o"); }) == ErrorCode::ParseError);
}

TEST_CASE("join over two profiled columns equals a nested-loop join") {
    const GraphStore s = profiled({{"f.csv", "a,b\n1,\n2,\n"}});
    const auto q = parse_query("SELECT ?c ?n WHERE {?c rdf:type du:Column . ?c du:emptyCount ?n}", kVocab.prefixes());
    const auto expected = testsupport::oracle::nested_loop_join(s.triples(), q, 1'000'000);
    REQUIRE(expected);
    CHECK(expected->size() == 2);
    CHECK(testsupport::as_rows(query_bgp(s, q)) == *expected);
    CHECK(s.match({Variable{"s"}, kVocab.empty_count(), Variable{"o"}}).size() == 2);
}

TEST_CASE("random BGPs equal the nested-loop oracle; rows are distinct and ordered") {
    testsupport::Rng rng(2024);
    int compared = 0;
    for (int round = 0; round < 60; ++round) {
        const auto triples = testsupport::random_triples(rng, std::uniform_int_distribution<std::size_t>(0, 400)(rng));
        GraphStore s;
        for (const auto& t : triples) s.insert(t);
        const auto stored = s.triples();
        for (int q = 0; q < 5; ++q) {
            const auto query = testsupport::random_query(rng, stored, 4);
            const auto expected = testsupport::oracle::nested_loop_join(stored, query, 100'000);
            if (!expected) continue;
            const auto got = query_bgp(s, query);
            REQUIRE(got.variables == query.selected);
            const auto rows = testsupport::as_rows(got);
            CHECK(rows == *expected);
            CHECK(rows.size() == got.rows.size());
            for (std::size_t i = 1; i < got.rows.size(); ++i) {
                std::vector<std::string> a, b;
                for (const auto& v : got.variables) {
                    a.push_back(got.rows[i - 1].at(v).to_ntriples());
                    b.push_back(got.rows[i].at(v).to_ntriples());
                }
                CHECK(a < b);
            }
            ++compared;
        }
    }
    CHECK(compared > 250);
}
