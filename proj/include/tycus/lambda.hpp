#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tycus/pcq.hpp"
#include "tycus/shacl.hpp"

namespace tycus {

struct Type;
using TypePtr = std::shared_ptr<const Type>;

/// λ_SHACL types: shape names, functions, lists, records and bool.
struct Type {
    struct Shape {
        std::string name;
    };
    struct Bool {};
    struct Func {
        TypePtr domain;
        TypePtr codomain;
    };
    struct List {
        TypePtr elem;
    };
    struct Record {
        std::vector<std::pair<std::string, TypePtr>> fields;  // labels unique
    };

    std::variant<Shape, Bool, Func, List, Record> node;

    static TypePtr shape(std::string name);
    static TypePtr boolean();
    static TypePtr func(TypePtr dom, TypePtr cod);
    static TypePtr list(TypePtr elem);
    static TypePtr record(std::vector<std::pair<std::string, TypePtr>> fields);

    std::string to_string() const;
};

/// Structural equality; record fields compare label-wise (order immaterial).
bool type_equal(const TypePtr& a, const TypePtr& b);

TypePtr parse_type(const std::string& text);

struct Term;
using TermPtr = std::shared_ptr<const Term>;

/// Projection label: a plain identifier (record field, query variable or
/// simple IRI — disambiguated by the subject) or an explicit path expression.
using ProjLabel = std::variant<std::string, PathPtr>;

std::string label_to_string(const ProjLabel& l);
PathPtr label_as_path(const ProjLabel& l);

struct Term {
    struct Var {
        std::string name;
    };
    struct Abs {
        std::string var;
        TypePtr ann;
        TermPtr body;
    };
    struct App {
        TermPtr fn;
        TermPtr arg;
    };
    struct Let {
        std::string var;
        TermPtr bound;
        TermPtr body;
    };
    struct Fix {
        TermPtr inner;
    };
    struct If {
        TermPtr cond;
        TermPtr then_branch;
        TermPtr else_branch;
    };
    struct BoolLit {
        bool value;
    };
    struct NilLit {
        TypePtr elem;
    };
    struct Cons {
        TermPtr head;
        TermPtr tail;
    };
    struct Null {
        TermPtr list;
    };
    struct Head {
        TermPtr list;
        bool synthesized = false;  // inserted by type elaboration
    };
    struct Tail {
        TermPtr list;
    };
    struct QueryTerm {
        Pcq query;
    };
    struct RecordTerm {
        std::vector<std::pair<std::string, TermPtr>> fields;
    };
    struct Proj {
        TermPtr subject;
        ProjLabel label;
        // Set by type elaboration on node projections: the generated shape
        // name used as the element annotation of empty runtime results.
        std::optional<std::string> shape_hint;
        bool elaborated = false;
    };
    struct NodeLit {
        Node value;
    };

    std::variant<Var, Abs, App, Let, Fix, If, BoolLit, NilLit, Cons, Null, Head, Tail, QueryTerm,
                 RecordTerm, Proj, NodeLit>
        node;
    int line = 0;  // source line, 0 for synthesized terms

    std::string to_string() const;
};

TermPtr make_term(Term t);

/// Values per the value grammar: nodes, records of values, nil, cons of
/// values, abstractions and booleans.
bool is_value(const TermPtr& t);

/// Capture-avoiding substitution [x -> replacement] t.
TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& replacement);

std::set<std::string> free_vars(const TermPtr& t);

/// Parses a program: an optional block of shape declarations followed by one
/// term. `letrec x:T = t1 in t2` desugars to `let x = fix (\(x:T). t1) in t2`.
std::pair<ShapeSet, TermPtr> parse_program(const std::string& text);

/// Parses a single term (no shape block).
TermPtr parse_term(const std::string& text);

/// Name of the shape inferred for `var` of a query term; content-derived so
/// every checking run and the evaluator agree on it.
std::string query_shape_name(const Pcq& q, const VarName& var);
std::string query_shape_id(const Pcq& q);

/// Name of the generated shape for a node projection over `path` on a subject
/// statically typed by shape `base`.
std::string node_proj_shape_name(const PathPtr& path, const std::string& base);

}  // namespace tycus
