#include <doctest.h>

#include "support/fixtures.hpp"
#include "support/gen.hpp"
#include "tycus/rdf.hpp"

using namespace tycus;
using namespace tycus::test;

TEST_CASE("parse_graph: single triple") {
    RdfGraph g = parse_graph("alice type Student .");
    REQUIRE(g.size() == 1);
    CHECK(g.contains(Triple{Node::iri("alice"), Node::iri("type"), Node::iri("Student")}));
}

TEST_CASE("parse_graph: empty input and comments") {
    CHECK(parse_graph("").empty());
    CHECK(parse_graph("# only a comment\n\n").empty());
}

TEST_CASE("parse_graph: the running example graph") {
    RdfGraph g = g1();
    CHECK(g.size() == 10);
    CHECK(g.contains(Triple{Node::iri("bob"), Node::iri("studiesAt"), Node::blank("b1")}));
    CHECK(g.contains(Triple{Node::blank("b1"), Node::iri("locatedIn"), Node::blank("b2")}));
    CHECK(g.contains(Triple{Node::iri("bob"), Node::iri("age"), Node::literal("25")}));
    CHECK(g.contains(Triple{Node::iri("alice"), Node::iri("name"), Node::literal("Alice A.")}));
}

TEST_CASE("parse_graph: duplicate lines collapse") {
    RdfGraph g = parse_graph("a p b .\na p b .\n");
    CHECK(g.size() == 1);
}

TEST_CASE("parse_graph: errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_graph("a p b .\na p ."), doctest::Contains("line 2"), ParseError);
    // predicate must be an IRI
    CHECK_THROWS_AS(parse_graph("a \"p\" b ."), ParseError);
    CHECK_THROWS_AS(parse_graph("a _:p b ."), ParseError);
    // subject must not be a literal
    CHECK_THROWS_AS(parse_graph("\"a\" p b ."), ParseError);
    CHECK_THROWS_AS(parse_graph("a p b"), ParseError);
}

TEST_CASE("nodes: subjects and objects only") {
    CHECK(RdfGraph().nodes().empty());

    RdfGraph single = parse_graph("a p b .");
    CHECK(single.nodes() == std::set<Node>{Node::iri("a"), Node::iri("b")});

    // Independent enumeration of subjects/objects of the example graph.
    RdfGraph g = g1();
    std::set<Node> expected;
    for (const auto& t : g.triples()) {
        expected.insert(t.subject);
        expected.insert(t.object);
    }
    CHECK(g.nodes() == expected);
    // Frozen from that enumeration: 10 distinct nodes, predicates excluded.
    std::set<Node> frozen = {Node::iri("alice"),        Node::iri("bob"),
                             Node::iri("Student"),      Node::iri("Person"),
                             Node::iri("University"),   Node::literal("Alice A."),
                             Node::literal("Bob"),      Node::literal("25"),
                             Node::blank("b1"),         Node::blank("b2")};
    CHECK(g.nodes() == frozen);
    CHECK(g.nodes().count(Node::iri("studiesAt")) == 0);
}

TEST_CASE("node equality: kinds are pairwise disjoint") {
    CHECK(Node::iri("a") != Node::literal("a"));
    CHECK(Node::iri("a") != Node::blank("a"));
    CHECK(Node::literal("a") != Node::blank("a"));
    CHECK(Node::iri("a") == Node::iri("a"));
}

TEST_CASE("serialize_graph: deterministic and sorted") {
    CHECK(serialize_graph(RdfGraph()) == "");
    CHECK(serialize_graph(parse_graph("a p b .")) == "a p b .\n");
    std::string two = serialize_graph(parse_graph("z p y .\na p b ."));
    CHECK(two == "a p b .\nz p y .\n");
}

TEST_CASE("property: parse_graph . serialize_graph is the identity") {
    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        RdfGraph g = random_graph(rng, 8, 12);
        CHECK(parse_graph(serialize_graph(g)) == g);
    }
}

TEST_CASE("property: nodes of an extended graph") {
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        RdfGraph g = random_graph(rng, 6, 8);
        auto pool = node_pool(6);
        Triple t{rng.pick(pool), Node::iri(rng.pick(pred_vocab())), rng.pick(pool)};
        if (t.subject.kind == NodeKind::Literal) continue;
        std::vector<Triple> triples(g.triples().begin(), g.triples().end());
        triples.push_back(t);
        RdfGraph extended(triples);
        std::set<Node> expected = g.nodes();
        expected.insert(t.subject);
        expected.insert(t.object);
        CHECK(extended.nodes() == expected);
    }
}
