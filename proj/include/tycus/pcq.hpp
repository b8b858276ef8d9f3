#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tycus/rdf.hpp"

namespace tycus {

struct PathExpr;
using PathPtr = std::shared_ptr<const PathExpr>;

/// Property path expression: iri | r- | r/r | r+
struct PathExpr {
    struct Iri {
        std::string name;
    };
    struct Inverse {
        PathPtr inner;
    };
    struct Seq {
        PathPtr left;
        PathPtr right;
    };
    struct Plus {
        PathPtr inner;
    };

    std::variant<Iri, Inverse, Seq, Plus> node;

    static PathPtr iri(std::string name);
    static PathPtr inverse(PathPtr r);
    static PathPtr seq(PathPtr a, PathPtr b);
    static PathPtr plus(PathPtr r);

    /// Concrete syntax: `studiesAt`, `studiesAt-`, `a/b`, `(a/b)+`.
    std::string to_string() const;
};

bool path_equal(const PathPtr& a, const PathPtr& b);

/// Parses a property path expression. Postfix `-` inverts, postfix `+` is
/// transitive closure, `/` sequences, parentheses group.
PathPtr parse_path(const std::string& text);

using VarName = std::string;

/// A body pattern; variables occupy node positions only.
struct Pattern {
    struct SubjVar {
        VarName var;
        PathPtr path;
        Node value;
    };
    struct ObjVar {
        Node value;
        PathPtr path;
        VarName var;
    };
    struct TwoVars {
        VarName subj;
        PathPtr path;
        VarName obj;  // may equal subj (self loop)
    };

    std::variant<SubjVar, ObjVar, TwoVars> node;

    std::string to_string() const;
    std::set<VarName> vars() const;
};

/// Path-conjunctive query: answer-variable head plus a conjunctive body.
struct Pcq {
    std::vector<VarName> head;
    std::vector<Pattern> body;

    std::set<VarName> vars() const;
    std::string to_string() const;
};

bool pcq_equal(const Pcq& a, const Pcq& b);

/// A query answer: a finite map from variables to graph nodes.
using Mapping = std::map<VarName, Node>;
using MappingSet = std::set<Mapping>;

/// Parses `(x1,...,xn) <- pattern ^ pattern ^ ...` with `^` or `∧` for
/// conjunction. Subject/object tokens are variables when they are a single
/// lowercase letter followed by digits (x, x1, y, ...) or start with `?`;
/// anything else is a constant.
Pcq parse_query(const std::string& text);

/// r(G): all node pairs connected by a path matching r.
std::set<std::pair<Node, Node>> eval_path(const PathPtr& r, const RdfGraph& g);

/// Caches r(G) results per path within one evaluation context.
class PathCache {
public:
    const std::set<std::pair<Node, Node>>& get(const PathPtr& r, const RdfGraph& g);

private:
    std::map<std::string, std::set<std::pair<Node, Node>>> cache_;
};

/// All unions of compatible mapping pairs (the ⋈ of Q-CONJ).
MappingSet join_mappings(const MappingSet& a, const MappingSet& b);

/// Evaluates q over g: per-pattern mapping sets joined and projected onto the
/// head variables. Result is a set; order is the total order on mappings.
MappingSet eval_query(const Pcq& q, const RdfGraph& g);
MappingSet eval_query(const Pcq& q, const RdfGraph& g, PathCache& cache);

}  // namespace tycus
