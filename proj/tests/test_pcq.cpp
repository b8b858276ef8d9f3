#include <doctest.h>

#include "support/fixtures.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"
#include "tycus/pcq.hpp"

using namespace tycus;
using namespace tycus::test;

namespace {

Mapping m(std::initializer_list<std::pair<std::string, Node>> entries) {
    Mapping out;
    for (const auto& [k, v] : entries) out.emplace(k, v);
    return out;
}

}  // namespace

TEST_CASE("parse_query: the running example query") {
    Pcq q = parse_query("(x1,x2) <- x1 type Student ^ x1 studiesAt x2");
    REQUIRE(q.head == std::vector<VarName>{"x1", "x2"});
    REQUIRE(q.body.size() == 2);
    CHECK(q.body[0].to_string() == "x1 type Student");
    CHECK(q.body[1].to_string() == "x1 studiesAt x2");
    // the unicode conjunction spelling parses to the same query
    CHECK(pcq_equal(q, parse_query("(x1,x2) <- x1 type Student \xE2\x88\xA7 x1 studiesAt x2")));
}

TEST_CASE("parse_query: single pattern and head-subset rule") {
    Pcq q = parse_query("(x) <- x type Student");
    CHECK(q.head == std::vector<VarName>{"x"});
    CHECK(q.body.size() == 1);

    CHECK_NOTHROW(parse_query("(y) <- x knows y"));
    CHECK_THROWS_AS(parse_query("(z) <- x knows y"), ParseError);
    CHECK_THROWS_AS(parse_query("(x,x) <- x knows y"), ParseError);
    CHECK_THROWS_AS(parse_query("() <- x knows y"), ParseError);
    CHECK_THROWS_AS(parse_query("(x) <- alice knows bob"), ParseError);
}

TEST_CASE("parse_path: postfix and grouping") {
    CHECK(parse_path("studiesAt-")->to_string() == "studiesAt-");
    CHECK(parse_path("a/b/c")->to_string() == "a/b/c");
    CHECK(parse_path("(a/b)+")->to_string() == "(a/b)+");
    CHECK(parse_path("a+-")->to_string() == "a+-");
    for (const std::string& s : {"studiesAt", "a/b", "(a/b)-", "a+", "(a-/b)+"}) {
        CHECK(parse_path(s)->to_string() == s);
    }
}

TEST_CASE("eval_path: iri and inverse on the example graph") {
    RdfGraph g = g1();
    auto type_pairs = eval_path(PathExpr::iri("type"), g);
    CHECK(type_pairs.count({Node::iri("alice"), Node::iri("Student")}) == 1);

    auto inv = eval_path(PathExpr::inverse(PathExpr::iri("studiesAt")), g);
    CHECK(inv == std::set<std::pair<Node, Node>>{{Node::blank("b1"), Node::iri("bob")}});
}

TEST_CASE("eval_path: transitive closure on a chain") {
    RdfGraph g = parse_graph("a knows b .\nb knows c .");
    PathPtr plus = PathExpr::plus(PathExpr::iri("knows"));
    auto got = eval_path(plus, g);
    // oracle first, then frozen expectation
    CHECK(got == oracle_eval_path(plus, g));
    std::set<std::pair<Node, Node>> frozen = {{Node::iri("a"), Node::iri("b")},
                                              {Node::iri("b"), Node::iri("c")},
                                              {Node::iri("a"), Node::iri("c")}};
    CHECK(got == frozen);
}

TEST_CASE("eval_path: closure terminates on cycles") {
    RdfGraph g = parse_graph("a knows b .\nb knows a .");
    PathPtr plus = PathExpr::plus(PathExpr::iri("knows"));
    auto got = eval_path(plus, g);
    CHECK(got == oracle_eval_path(plus, g));
    CHECK(got.size() == 4);  // all pairs, including self-loops through the cycle
}

TEST_CASE("eval_query: worked example yields the single join result") {
    RdfGraph g = g1();
    Pcq q1 = parse_query("(x1,x2) <- x1 type Student ^ x1 studiesAt x2");
    MappingSet got = eval_query(q1, g);
    MappingSet expected{m({{"x1", Node::iri("bob")}, {"x2", Node::blank("b1")}})};
    CHECK(got == expected);

    MappingSet students = eval_query(parse_query("(x1) <- x1 type Student"), g);
    MappingSet expected2{m({{"x1", Node::iri("alice")}}), m({{"x1", Node::iri("bob")}})};
    CHECK(students == expected2);
}

TEST_CASE("eval_query: empty graph yields no mappings") {
    CHECK(eval_query(parse_query("(x) <- x type Student"), RdfGraph()).empty());
}

TEST_CASE("eval_query: self-loop pattern binds both positions to one node") {
    RdfGraph g = parse_graph("a knows a .\na knows b .");
    MappingSet got = eval_query(parse_query("(x) <- x knows x"), g);
    CHECK(got == MappingSet{m({{"x", Node::iri("a")}})});
}

TEST_CASE("join_mappings: compatibility") {
    Node alice = Node::iri("alice"), bob = Node::iri("bob"), b1 = Node::blank("b1");
    MappingSet left{m({{"x1", alice}}), m({{"x1", bob}})};
    MappingSet right{m({{"x1", bob}, {"x2", b1}})};
    CHECK(join_mappings(left, right) == MappingSet{m({{"x1", bob}, {"x2", b1}})});

    // the empty mapping is compatible with everything
    MappingSet unit{Mapping{}};
    CHECK(join_mappings(left, unit) == left);

    // disjoint domains: full cross product (checked by enumeration)
    MappingSet ys{m({{"y", alice}}), m({{"y", bob}})};
    MappingSet product = join_mappings(left, ys);
    MappingSet expected;
    for (const auto& a : left)
        for (const auto& b : ys) {
            Mapping u = a;
            u.insert(b.begin(), b.end());
            expected.insert(u);
        }
    CHECK(product == expected);
    CHECK(product.size() == 4);
}

TEST_CASE("property: join is commutative and associative") {
    Rng rng(11);
    auto random_mapping_set = [&](int vars) {
        MappingSet out;
        auto pool = node_pool(4);
        int n = rng.below(4);
        for (int i = 0; i < n; ++i) {
            Mapping mu;
            for (int v = 0; v < vars; ++v)
                if (rng.coin()) mu[std::string(1, char('x' + v))] = rng.pick(pool);
            out.insert(mu);
        }
        return out;
    };
    for (int i = 0; i < 200; ++i) {
        MappingSet a = random_mapping_set(3), b = random_mapping_set(3),
                   c = random_mapping_set(3);
        CHECK(join_mappings(a, b) == join_mappings(b, a));
        CHECK(join_mappings(join_mappings(a, b), c) == join_mappings(a, join_mappings(b, c)));
    }
}

TEST_CASE("property: results bind exactly the head and satisfy the body") {
    Rng rng(23);
    for (int i = 0; i < 150; ++i) {
        RdfGraph g = random_graph(rng, 6, 10);
        Pcq q = random_query(rng, 3, 2, 6);
        for (const auto& mu : eval_query(q, g)) {
            std::set<VarName> dom;
            for (const auto& [k, _] : mu) dom.insert(k);
            CHECK(dom == std::set<VarName>(q.head.begin(), q.head.end()));
        }
        // full-projection results witness every body pattern
        Pcq full = q;
        std::set<VarName> all_vars = q.vars();
        full.head.assign(all_vars.begin(), all_vars.end());
        for (const auto& mu : eval_query(full, g))
            for (const auto& p : q.body) CHECK(oracle_pattern_holds(p, mu, g));
    }
}

TEST_CASE("property: plus is a superset of its base and a closure fixpoint") {
    Rng rng(31);
    for (int i = 0; i < 100; ++i) {
        RdfGraph g = random_graph(rng, 6, 10);
        PathPtr base = random_path(rng, 1);
        auto r = eval_path(base, g);
        auto plus = eval_path(PathExpr::plus(base), g);
        for (const auto& pr : r) CHECK(plus.count(pr) == 1);
        // composing the closure with the base adds nothing new
        for (const auto& [a, b] : plus)
            for (const auto& [c, d] : r)
                if (b == c) CHECK(plus.count({a, d}) == 1);
    }
}

TEST_CASE("property: eval_query agrees with the enumerate-and-filter oracle") {
    Rng rng(5);
    for (int i = 0; i < 150; ++i) {
        RdfGraph g = random_graph(rng, 6, 9);
        Pcq q = random_query(rng, 3, 2, 6);
        CHECK(eval_query(q, g) == oracle_eval_query(q, g));
    }
}
