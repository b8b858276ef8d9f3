#pragma once

#include <map>
#include <string>

#include "tycus/pcq.hpp"
#include "tycus/shacl.hpp"

namespace tycus {

/// Shapes inferred from one query: exactly one per variable of the body. The
/// shape for variable x is named `<query_id>$<x>`.
struct InferredShapeSet {
    std::string query_id;
    std::map<VarName, Shape> by_var;

    ShapeSet shapes() const;
};

std::string inferred_shape_name(const std::string& query_id, const VarName& var);

/// Derives one shape per query variable: subject/object var patterns yield
/// `>=1 r.v` / `>=1 r-.v`, two-variable patterns yield mutually referencing
/// shapes, conjunctions are combined with shape_join, and the final target of
/// every shape is the full query body projected onto that variable.
InferredShapeSet infer_shapes(const Pcq& q, const std::string& query_id);

/// Full outer join on shape names: shared names get conjoined constraints and
/// conjoined (deduplicated) target bodies; others are carried over unchanged.
InferredShapeSet shape_join(const InferredShapeSet& a, const InferredShapeSet& b);

/// The target-node assignment: each shape is assigned exactly to the results
/// of its target query, negatively everywhere else.
Assignment construct_query_assignment(const InferredShapeSet& sq, const RdfGraph& g);
Assignment construct_query_assignment(const ShapeSet& shapes, const RdfGraph& g);

/// 64-bit FNV-1a, hex encoded; used for content-derived generated shape names.
std::string content_hash(const std::string& data);

}  // namespace tycus
