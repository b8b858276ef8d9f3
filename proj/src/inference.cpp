#include "tycus/inference.hpp"

#include <algorithm>

namespace tycus {

ShapeSet InferredShapeSet::shapes() const {
    ShapeSet out;
    for (const auto& [_, s] : by_var) out.emplace(s.name, s);
    return out;
}

std::string inferred_shape_name(const std::string& query_id, const VarName& var) {
    return query_id + "$" + var;
}

namespace {

std::vector<Pattern> dedup_body(std::vector<Pattern> body) {
    std::vector<Pattern> out;
    std::set<std::string> seen;
    for (auto& p : body)
        if (seen.insert(p.to_string()).second) out.push_back(std::move(p));
    return out;
}

InferredShapeSet infer_pattern(const Pattern& p, const std::string& query_id) {
    InferredShapeSet out;
    out.query_id = query_id;
    if (auto* sv = std::get_if<Pattern::SubjVar>(&p.node)) {
        Shape s;
        s.name = inferred_shape_name(query_id, sv->var);
        s.constraint = Constraint::at_least(1, sv->path, Constraint::constant(sv->value));
        s.target = Pcq{{sv->var}, {p}};
        out.by_var.emplace(sv->var, std::move(s));
    } else if (auto* ov = std::get_if<Pattern::ObjVar>(&p.node)) {
        Shape s;
        s.name = inferred_shape_name(query_id, ov->var);
        s.constraint = Constraint::at_least(1, PathExpr::inverse(ov->path),
                                            Constraint::constant(ov->value));
        s.target = Pcq{{ov->var}, {p}};
        out.by_var.emplace(ov->var, std::move(s));
    } else {
        const auto& tv = std::get<Pattern::TwoVars>(p.node);
        std::string subj_name = inferred_shape_name(query_id, tv.subj);
        std::string obj_name = inferred_shape_name(query_id, tv.obj);
        ConstraintPtr fwd = Constraint::at_least(1, tv.path, Constraint::ref(obj_name));
        ConstraintPtr bwd =
            Constraint::at_least(1, PathExpr::inverse(tv.path), Constraint::ref(subj_name));
        if (tv.subj == tv.obj) {
            Shape s;
            s.name = subj_name;
            s.constraint = canon_constraint(Constraint::conj(fwd, bwd));
            s.target = Pcq{{tv.subj}, {p}};
            out.by_var.emplace(tv.subj, std::move(s));
        } else {
            Shape s1;
            s1.name = subj_name;
            s1.constraint = fwd;
            s1.target = Pcq{{tv.subj}, {p}};
            Shape s2;
            s2.name = obj_name;
            s2.constraint = bwd;
            s2.target = Pcq{{tv.obj}, {p}};
            out.by_var.emplace(tv.subj, std::move(s1));
            out.by_var.emplace(tv.obj, std::move(s2));
        }
    }
    return out;
}

}  // namespace

InferredShapeSet shape_join(const InferredShapeSet& a, const InferredShapeSet& b) {
    InferredShapeSet out;
    out.query_id = a.query_id.empty() ? b.query_id : a.query_id;
    for (const auto& [var, sa] : a.by_var) {
        auto it = b.by_var.find(var);
        if (it == b.by_var.end()) {
            out.by_var.emplace(var, sa);
            continue;
        }
        const Shape& sb = it->second;
        Shape joined;
        joined.name = sa.name;
        joined.constraint = canon_constraint(Constraint::conj(sa.constraint, sb.constraint));
        std::vector<Pattern> body = sa.target->body;
        body.insert(body.end(), sb.target->body.begin(), sb.target->body.end());
        joined.target = Pcq{{var}, dedup_body(std::move(body))};
        out.by_var.emplace(var, std::move(joined));
    }
    for (const auto& [var, sb] : b.by_var)
        if (!a.by_var.count(var)) out.by_var.emplace(var, sb);
    return out;
}

InferredShapeSet infer_shapes(const Pcq& q, const std::string& query_id) {
    InferredShapeSet acc;
    acc.query_id = query_id;
    for (const auto& p : q.body) acc = shape_join(acc, infer_pattern(p, query_id));
    // R-PROJ: targets become the full query body projected per variable.
    for (auto& [var, shape] : acc.by_var) {
        shape.target = Pcq{{var}, q.body};
        shape.constraint = canon_constraint(shape.constraint);
    }
    return acc;
}

Assignment construct_query_assignment(const ShapeSet& shapes, const RdfGraph& g) {
    std::set<std::string> names;
    for (const auto& [n, _] : shapes) names.insert(n);
    Assignment sigma(std::move(names), g.nodes());
    PathCache cache;
    for (const auto& [name, shape] : shapes) {
        if (!shape.target) continue;
        const std::string& var = shape.target->head.front();
        for (const auto& m : eval_query(*shape.target, g, cache)) sigma.assign(m.at(var), name);
    }
    return sigma;
}

Assignment construct_query_assignment(const InferredShapeSet& sq, const RdfGraph& g) {
    return construct_query_assignment(sq.shapes(), g);
}

std::string content_hash(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace tycus
