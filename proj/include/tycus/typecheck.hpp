#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tycus/inference.hpp"
#include "tycus/lambda.hpp"

namespace tycus {

struct TypeDiagnostic {
    std::string rule;  // typing rule that failed, e.g. "T-APP"
    int line = 0;      // source line, 0 when unknown
    std::string message;
    std::string expected;  // printed expected type, may be empty
    std::string actual;    // printed actual type, may be empty

    std::string to_string() const;
};

class TypeCheckError : public std::runtime_error {
public:
    explicit TypeCheckError(TypeDiagnostic d)
        : std::runtime_error(d.to_string()), diag_(std::move(d)) {}

    const TypeDiagnostic& diagnostic() const { return diag_; }

private:
    TypeDiagnostic diag_;
};

/// Ordered type bindings; lookup returns the innermost one.
using TypingContext = std::vector<std::pair<std::string, TypePtr>>;

struct TypingResult {
    TermPtr elaborated;
    TypePtr type;
    ShapeSet new_shapes;  // shapes created during checking (queries, projections, lub/glb)
};

/// Structural subtyping; shape-vs-shape delegates to shape_subsumes.
bool subtype(const ShapeSet& shapes, const TypePtr& t1, const TypePtr& t2);

/// Algorithmic shape subsumption by constraint-set comparison: every conjunct
/// of s2's constraint must be covered by s1's. Sound but incomplete; reference
/// cycles are handled coinductively.
bool shape_subsumes(const ShapeSet& shapes, const std::string& s1, const std::string& s2);

/// Least upper bound. For two distinct shapes a fresh shape constrained by
/// their disjunction is created and returned alongside the type.
std::pair<TypePtr, ShapeSet> lub(const ShapeSet& shapes, const TypePtr& t1, const TypePtr& t2);

/// Greatest lower bound; dual of lub (conjunction for shapes).
std::pair<TypePtr, ShapeSet> glb(const ShapeSet& shapes, const TypePtr& t1, const TypePtr& t2);

/// Type-checks and elaborates a term. `node_typing`, when given, types bare
/// graph-node literals by shape name (used when re-checking run-time terms);
/// without it node literals are rejected.
TypingResult typecheck(const ShapeSet& shapes, const TypingContext& ctx, const TermPtr& t,
                       const std::map<Node, std::string>* node_typing = nullptr);

/// T-PROGRAM: checks the term under ambient ∪ program shapes.
TypingResult typecheck_program(const ShapeSet& ambient, const ShapeSet& program_shapes,
                               const TermPtr& t);

}  // namespace tycus
