#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tycus/pcq.hpp"
#include "tycus/rdf.hpp"

namespace tycus {

struct Constraint;
using ConstraintPtr = std::shared_ptr<const Constraint>;

/// SHACL constraint (logical abstraction):
///   φ ::= top | ref s | node v | φ and φ | not φ | >=n r . φ
/// The derived forms <=n, =n and `or` are desugared at construction.
struct Constraint {
    struct Top {};
    struct ShapeRef {
        std::string name;
    };
    struct NodeConst {
        Node value;
    };
    struct And {
        ConstraintPtr left;
        ConstraintPtr right;
    };
    struct Not {
        ConstraintPtr inner;
    };
    struct AtLeast {
        int count;  // >= 1
        PathPtr path;
        ConstraintPtr inner;
    };

    std::variant<Top, ShapeRef, NodeConst, And, Not, AtLeast> node;

    static ConstraintPtr top();
    static ConstraintPtr ref(std::string name);
    static ConstraintPtr constant(Node v);
    static ConstraintPtr conj(ConstraintPtr a, ConstraintPtr b);
    static ConstraintPtr neg(ConstraintPtr a);
    static ConstraintPtr at_least(int n, PathPtr r, ConstraintPtr inner);
    /// <=n r.φ  ==  not (>=n+1 r.φ)
    static ConstraintPtr at_most(int n, PathPtr r, ConstraintPtr inner);
    /// =n r.φ  ==  (<=n r.φ) and (>=n r.φ)
    static ConstraintPtr exactly(int n, PathPtr r, ConstraintPtr inner);
    /// a or b  ==  not (not a and not b)
    static ConstraintPtr disj(ConstraintPtr a, ConstraintPtr b);

    std::string to_string() const;
};

/// Canonical form: `and`-trees flattened, conjuncts sorted and deduplicated at
/// every level. Two constraints are treated as equal iff their canonical
/// printed forms agree.
ConstraintPtr canon_constraint(const ConstraintPtr& c);

/// Top-level conjunct list of the canonical form; `top` yields the empty list.
std::vector<ConstraintPtr> conjuncts(const ConstraintPtr& c);

bool constraint_equal(const ConstraintPtr& a, const ConstraintPtr& b);

/// Parses one constraint in the .shc syntax.
ConstraintPtr parse_constraint(const std::string& text);

/// A named shape: constraint plus an optional single-variable target query.
struct Shape {
    std::string name;
    ConstraintPtr constraint;
    std::optional<Pcq> target;  // head has exactly one variable when present
};

using ShapeSet = std::map<std::string, Shape>;

/// Parses `shape <name> [target (x) <- body] constraint <φ>` declarations.
/// Checks name uniqueness and that all shape references resolve in the set.
ShapeSet parse_shapes(const std::string& text);

/// As parse_shapes but without the reference-resolution check; used for
/// program shape blocks whose references may point at ambient shapes.
ShapeSet parse_shape_decls(const std::string& text);

/// Throws ParseError if some ShapeRef does not resolve within `shapes`.
void check_shape_refs(const ShapeSet& shapes);

std::string serialize_shapes(const ShapeSet& shapes);

/// Total assignment: for every node and declared shape name, membership is
/// decidable (absent entries mean "not assigned").
class Assignment {
public:
    Assignment() = default;
    Assignment(std::set<std::string> shape_names, std::set<Node> universe)
        : shape_names_(std::move(shape_names)), universe_(std::move(universe)) {}

    void assign(const Node& v, const std::string& shape) { positive_[v].insert(shape); }
    void retract(const Node& v, const std::string& shape);
    bool contains(const Node& v, const std::string& shape) const;

    const std::set<std::string>& shape_names() const { return shape_names_; }
    const std::set<Node>& universe() const { return universe_; }
    const std::map<Node, std::set<std::string>>& positive() const { return positive_; }

    bool operator==(const Assignment& o) const;

private:
    std::set<std::string> shape_names_;
    std::set<Node> universe_;
    std::map<Node, std::set<std::string>> positive_;
};

/// σ_inv: the shape-to-node-set view of an assignment.
class InverseAssignment {
public:
    InverseAssignment() = default;
    InverseAssignment(std::map<std::string, std::set<Node>> by_shape, std::set<Node> universe)
        : by_shape_(std::move(by_shape)), universe_(std::move(universe)) {}

    const std::set<Node>& nodes_of(const std::string& shape) const;
    const std::map<std::string, std::set<Node>>& by_shape() const { return by_shape_; }
    const std::set<Node>& universe() const { return universe_; }

private:
    std::map<std::string, std::set<Node>> by_shape_;
    std::set<Node> universe_;
};

InverseAssignment invert(const Assignment& sigma);
Assignment invert(const InverseAssignment& sigma_inv);

/// Structural constraint evaluation per the evaluation-rules figure.
bool eval_constraint(const ConstraintPtr& c, const Node& v, const RdfGraph& g,
                     const Assignment& sigma);
bool eval_constraint(const ConstraintPtr& c, const Node& v, const RdfGraph& g,
                     const Assignment& sigma, PathCache& cache);

/// Thrown when a shape-reference cycle passes through negation.
class StratificationError : public std::runtime_error {
public:
    explicit StratificationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Violation {
    std::string shape;
    Node node;
    std::string violated;  // printed form of the outermost violated conjunct
};

struct ValidationResult {
    std::optional<Assignment> assignment;  // set iff conformant
    std::vector<Violation> violations;

    bool conformant() const { return assignment.has_value(); }
};

/// Computes the faithful assignment for a stratified shape set: target nodes
/// seed the assignment, positive reference cycles are closed by least-fixpoint
/// iteration, and the three faithfulness conditions are re-checked on the
/// result. Violations are reported per (shape, node, conjunct).
ValidationResult compute_faithful_assignment(const ShapeSet& shapes, const RdfGraph& g);

}  // namespace tycus
