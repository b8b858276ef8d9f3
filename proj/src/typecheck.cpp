#include "tycus/typecheck.hpp"

#include <algorithm>
#include <functional>

namespace tycus {

std::string TypeDiagnostic::to_string() const {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    out += "[" + rule + "] " + message;
    if (!expected.empty() || !actual.empty())
        out += " (expected: " + expected + ", actual: " + actual + ")";
    return out;
}

namespace {

using Resolver = std::function<const Shape*(const std::string&)>;

Resolver make_resolver(const ShapeSet& shapes) {
    return [&shapes](const std::string& name) -> const Shape* {
        auto it = shapes.find(name);
        return it == shapes.end() ? nullptr : &it->second;
    };
}

// ---------------------------------------------------------------------------
// Shape subsumption: conjunct-set coverage.
// ---------------------------------------------------------------------------

using NamePair = std::pair<std::string, std::string>;

struct SubsumeCtx {
    const Resolver& resolve;
};

bool subsumes_names(const SubsumeCtx& ctx, const std::string& s1, const std::string& s2,
                    std::set<NamePair> assumptions);

bool covers_set(const SubsumeCtx& ctx, const std::vector<ConstraintPtr>& strong,
                const std::vector<ConstraintPtr>& weak, std::set<NamePair> assumptions,
                std::set<std::string> strong_unfolded, std::set<std::string> weak_unfolded);

// Recognizes the desugared disjunction not(not a and not b and ...) and
// returns the disjuncts.
std::vector<ConstraintPtr> as_disjunction(const ConstraintPtr& c) {
    auto* n = std::get_if<Constraint::Not>(&c->node);
    if (!n) return {};
    if (!std::holds_alternative<Constraint::And>(n->inner->node)) return {};
    std::vector<ConstraintPtr> parts = conjuncts(n->inner);
    std::vector<ConstraintPtr> disjuncts;
    for (const auto& p : parts) {
        auto* pn = std::get_if<Constraint::Not>(&p->node);
        if (!pn) return {};
        disjuncts.push_back(pn->inner);
    }
    return disjuncts;
}

bool atom_covers(const SubsumeCtx& ctx, const ConstraintPtr& strong, const ConstraintPtr& weak,
                 const std::set<NamePair>& assumptions, const std::set<std::string>& strong_unfolded,
                 const std::set<std::string>& weak_unfolded) {
    if (constraint_equal(strong, weak)) return true;

    auto* sref = std::get_if<Constraint::ShapeRef>(&strong->node);
    auto* wref = std::get_if<Constraint::ShapeRef>(&weak->node);
    if (sref && wref) return subsumes_names(ctx, sref->name, wref->name, assumptions);

    auto* sal = std::get_if<Constraint::AtLeast>(&strong->node);
    auto* wal = std::get_if<Constraint::AtLeast>(&weak->node);
    if (sal && wal) {
        if (!path_equal(sal->path, wal->path)) return false;
        if (sal->count < wal->count) return false;
        return covers_set(ctx, conjuncts(sal->inner), conjuncts(wal->inner), assumptions,
                          strong_unfolded, weak_unfolded);
    }

    // A reference on the strong side may be unfolded to its definition: a node
    // conforming to the referenced shape satisfies its constraint.
    if (sref && !strong_unfolded.count(sref->name)) {
        const Shape* def = ctx.resolve(sref->name);
        if (def) {
            auto su = strong_unfolded;
            su.insert(sref->name);
            return covers_set(ctx, conjuncts(def->constraint), {weak}, assumptions, su,
                              weak_unfolded);
        }
    }
    return false;
}

bool covers_one(const SubsumeCtx& ctx, const std::vector<ConstraintPtr>& strong,
                const ConstraintPtr& weak, const std::set<NamePair>& assumptions,
                const std::set<std::string>& strong_unfolded,
                const std::set<std::string>& weak_unfolded) {
    if (std::holds_alternative<Constraint::Top>(weak->node)) return true;

    for (const auto& a : strong)
        if (atom_covers(ctx, a, weak, assumptions, strong_unfolded, weak_unfolded)) return true;

    // Disjunction on the weak side: covering one disjunct suffices.
    auto disjuncts = as_disjunction(weak);
    for (const auto& d : disjuncts)
        if (covers_set(ctx, strong, conjuncts(d), assumptions, strong_unfolded, weak_unfolded))
            return true;

    // A reference on the weak side may be unfolded: under faithful assignments
    // a node satisfying the referenced constraint conforms to the shape.
    if (auto* wref = std::get_if<Constraint::ShapeRef>(&weak->node)) {
        if (!weak_unfolded.count(wref->name)) {
            const Shape* def = ctx.resolve(wref->name);
            if (def) {
                auto wu = weak_unfolded;
                wu.insert(wref->name);
                return covers_set(ctx, strong, conjuncts(def->constraint), assumptions,
                                  strong_unfolded, wu);
            }
        }
    }
    return false;
}

bool covers_set(const SubsumeCtx& ctx, const std::vector<ConstraintPtr>& strong,
                const std::vector<ConstraintPtr>& weak, std::set<NamePair> assumptions,
                std::set<std::string> strong_unfolded, std::set<std::string> weak_unfolded) {
    for (const auto& w : weak)
        if (!covers_one(ctx, strong, w, assumptions, strong_unfolded, weak_unfolded)) return false;
    return true;
}

bool subsumes_names(const SubsumeCtx& ctx, const std::string& s1, const std::string& s2,
                    std::set<NamePair> assumptions) {
    if (s1 == s2) return true;
    if (assumptions.count({s1, s2})) return true;
    const Shape* d1 = ctx.resolve(s1);
    const Shape* d2 = ctx.resolve(s2);
    if (!d1 || !d2) return false;
    assumptions.insert({s1, s2});
    return covers_set(ctx, conjuncts(d1->constraint), conjuncts(d2->constraint), assumptions, {},
                      {});
}

// ---------------------------------------------------------------------------
// Subtyping
// ---------------------------------------------------------------------------

bool subtype_r(const Resolver& resolve, const TypePtr& t1, const TypePtr& t2) {
    if (type_equal(t1, t2)) return true;  // S-REFL

    auto* s1 = std::get_if<Type::Shape>(&t1->node);
    auto* s2 = std::get_if<Type::Shape>(&t2->node);
    if (s1 && s2) {
        SubsumeCtx ctx{resolve};
        return subsumes_names(ctx, s1->name, s2->name, {});
    }

    auto* l1 = std::get_if<Type::List>(&t1->node);
    auto* l2 = std::get_if<Type::List>(&t2->node);
    if (l1 && l2) return subtype_r(resolve, l1->elem, l2->elem);  // S-LIST

    auto* f1 = std::get_if<Type::Func>(&t1->node);
    auto* f2 = std::get_if<Type::Func>(&t2->node);
    if (f1 && f2)  // S-FUNC: contravariant domains, covariant codomains
        return subtype_r(resolve, f2->domain, f1->domain) &&
               subtype_r(resolve, f1->codomain, f2->codomain);

    auto* r1 = std::get_if<Type::Record>(&t1->node);
    auto* r2 = std::get_if<Type::Record>(&t2->node);
    if (r1 && r2) {  // S-RCDWIDTH + S-RCDPERM + S-RCDDEPTH
        for (const auto& [label, ft2] : r2->fields) {
            const TypePtr* ft1 = nullptr;
            for (const auto& [l1name, ft] : r1->fields)
                if (l1name == label) ft1 = &ft;
            if (!ft1 || !subtype_r(resolve, *ft1, ft2)) return false;
        }
        return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// lub / glb
// ---------------------------------------------------------------------------

void merge_shapes(ShapeSet& into, const ShapeSet& from) {
    for (const auto& [name, s] : from) into.emplace(name, s);
}

std::pair<TypePtr, ShapeSet> lub_r(const Resolver& resolve, const TypePtr& t1, const TypePtr& t2,
                                   int line);
std::pair<TypePtr, ShapeSet> glb_r(const Resolver& resolve, const TypePtr& t1, const TypePtr& t2,
                                   int line);

Shape make_bound_shape(const std::string& prefix, const std::string& a, const std::string& b,
                       bool disjunction, std::string* name_out) {
    std::string x = std::min(a, b), y = std::max(a, b);
    Shape s;
    s.name = prefix + content_hash(x + "|" + y);
    s.constraint = disjunction ? Constraint::disj(Constraint::ref(x), Constraint::ref(y))
                               : Constraint::conj(Constraint::ref(x), Constraint::ref(y));
    *name_out = s.name;
    return s;
}

std::pair<TypePtr, ShapeSet> lub_r(const Resolver& resolve, const TypePtr& t1, const TypePtr& t2,
                                   int line) {
    if (type_equal(t1, t2)) return {t1, {}};

    auto* s1 = std::get_if<Type::Shape>(&t1->node);
    auto* s2 = std::get_if<Type::Shape>(&t2->node);
    if (s1 && s2) {
        std::string name;
        Shape fresh = make_bound_shape("lub", s1->name, s2->name, true, &name);
        ShapeSet out;
        out.emplace(name, std::move(fresh));
        return {Type::shape(name), out};
    }

    auto* l1 = std::get_if<Type::List>(&t1->node);
    auto* l2 = std::get_if<Type::List>(&t2->node);
    if (l1 && l2) {
        auto [e, s] = lub_r(resolve, l1->elem, l2->elem, line);
        return {Type::list(e), s};
    }

    auto* f1 = std::get_if<Type::Func>(&t1->node);
    auto* f2 = std::get_if<Type::Func>(&t2->node);
    if (f1 && f2) {
        auto [d, sd] = glb_r(resolve, f1->domain, f2->domain, line);
        auto [c, sc] = lub_r(resolve, f1->codomain, f2->codomain, line);
        merge_shapes(sd, sc);
        return {Type::func(d, c), sd};
    }

    auto* r1 = std::get_if<Type::Record>(&t1->node);
    auto* r2 = std::get_if<Type::Record>(&t2->node);
    if (r1 && r2) {
        std::vector<std::pair<std::string, TypePtr>> fields;
        ShapeSet out;
        for (const auto& [label, ft1] : r1->fields) {
            for (const auto& [l2name, ft2] : r2->fields) {
                if (l2name != label) continue;
                auto [ft, s] = lub_r(resolve, ft1, ft2, line);
                merge_shapes(out, s);
                fields.emplace_back(label, ft);
            }
        }
        return {Type::record(std::move(fields)), out};
    }

    throw TypeCheckError({"lub", line, "no least upper bound", t1->to_string(), t2->to_string()});
}

std::pair<TypePtr, ShapeSet> glb_r(const Resolver& resolve, const TypePtr& t1, const TypePtr& t2,
                                   int line) {
    if (type_equal(t1, t2)) return {t1, {}};

    auto* s1 = std::get_if<Type::Shape>(&t1->node);
    auto* s2 = std::get_if<Type::Shape>(&t2->node);
    if (s1 && s2) {
        std::string name;
        Shape fresh = make_bound_shape("glb", s1->name, s2->name, false, &name);
        ShapeSet out;
        out.emplace(name, std::move(fresh));
        return {Type::shape(name), out};
    }

    auto* l1 = std::get_if<Type::List>(&t1->node);
    auto* l2 = std::get_if<Type::List>(&t2->node);
    if (l1 && l2) {
        auto [e, s] = glb_r(resolve, l1->elem, l2->elem, line);
        return {Type::list(e), s};
    }

    auto* f1 = std::get_if<Type::Func>(&t1->node);
    auto* f2 = std::get_if<Type::Func>(&t2->node);
    if (f1 && f2) {
        auto [d, sd] = lub_r(resolve, f1->domain, f2->domain, line);
        auto [c, sc] = glb_r(resolve, f1->codomain, f2->codomain, line);
        merge_shapes(sd, sc);
        return {Type::func(d, c), sd};
    }

    auto* r1 = std::get_if<Type::Record>(&t1->node);
    auto* r2 = std::get_if<Type::Record>(&t2->node);
    if (r1 && r2) {  // union of labels, shared ones combined
        std::vector<std::pair<std::string, TypePtr>> fields;
        ShapeSet out;
        for (const auto& [label, ft1] : r1->fields) {
            const TypePtr* ft2 = nullptr;
            for (const auto& [l2name, ft] : r2->fields)
                if (l2name == label) ft2 = &ft;
            if (ft2) {
                auto [ft, s] = glb_r(resolve, ft1, *ft2, line);
                merge_shapes(out, s);
                fields.emplace_back(label, ft);
            } else {
                fields.emplace_back(label, ft1);
            }
        }
        for (const auto& [label, ft2] : r2->fields) {
            bool shared = false;
            for (const auto& [l1name, _] : r1->fields)
                if (l1name == label) shared = true;
            if (!shared) fields.emplace_back(label, ft2);
        }
        return {Type::record(std::move(fields)), out};
    }

    throw TypeCheckError(
        {"glb", line, "no greatest lower bound", t1->to_string(), t2->to_string()});
}

// ---------------------------------------------------------------------------
// The checker
// ---------------------------------------------------------------------------

struct Checker {
    const ShapeSet& ambient;
    const std::map<Node, std::string>* node_typing;
    ShapeSet fresh;

    const Shape* find_shape(const std::string& name) const {
        auto it = fresh.find(name);
        if (it != fresh.end()) return &it->second;
        auto it2 = ambient.find(name);
        if (it2 != ambient.end()) return &it2->second;
        return nullptr;
    }

    Resolver resolver() const {
        return [this](const std::string& name) { return find_shape(name); };
    }

    void validate_type(const TypePtr& t, const std::string& rule, int line) {
        if (auto* s = std::get_if<Type::Shape>(&t->node)) {
            if (!find_shape(s->name))
                throw TypeCheckError({rule, line, "unknown shape '" + s->name + "'", "", ""});
        } else if (auto* f = std::get_if<Type::Func>(&t->node)) {
            validate_type(f->domain, rule, line);
            validate_type(f->codomain, rule, line);
        } else if (auto* l = std::get_if<Type::List>(&t->node)) {
            validate_type(l->elem, rule, line);
        } else if (auto* r = std::get_if<Type::Record>(&t->node)) {
            for (const auto& [_, ft] : r->fields) validate_type(ft, rule, line);
        }
    }

    bool is_subtype(const TypePtr& a, const TypePtr& b) { return subtype_r(resolver(), a, b); }

    std::pair<TermPtr, TypePtr> check(TypingContext& ctx, const TermPtr& t) {
        const Term& term = *t;
        int line = term.line;

        if (auto* v = std::get_if<Term::Var>(&term.node)) {
            for (auto it = ctx.rbegin(); it != ctx.rend(); ++it)
                if (it->first == v->name) return {t, it->second};
            throw TypeCheckError({"T-VAR", line, "unbound variable '" + v->name + "'", "", ""});
        }
        if (std::holds_alternative<Term::BoolLit>(term.node)) return {t, Type::boolean()};
        if (auto* n = std::get_if<Term::NodeLit>(&term.node)) {
            if (node_typing) {
                auto it = node_typing->find(n->value);
                if (it != node_typing->end()) return {t, Type::shape(it->second)};
            }
            throw TypeCheckError({"T-NODE", line,
                                  "graph node literal '" + n->value.to_string() +
                                      "' has no static type",
                                  "", ""});
        }
        if (auto* nil = std::get_if<Term::NilLit>(&term.node)) {
            validate_type(nil->elem, "T-NIL", line);
            return {t, Type::list(nil->elem)};
        }
        if (auto* a = std::get_if<Term::Abs>(&term.node)) {
            validate_type(a->ann, "T-ABS", line);
            ctx.emplace_back(a->var, a->ann);
            auto [body, body_t] = check(ctx, a->body);
            ctx.pop_back();
            return {make_term(Term{Term::Abs{a->var, a->ann, body}, line}),
                    Type::func(a->ann, body_t)};
        }
        if (auto* ap = std::get_if<Term::App>(&term.node)) {
            auto [fn, fn_t] = check(ctx, ap->fn);
            auto* f = std::get_if<Type::Func>(&fn_t->node);
            if (!f)
                throw TypeCheckError({"T-APP", line, "applying a non-function", "a function type",
                                      fn_t->to_string()});
            auto [arg, arg_t] = check(ctx, ap->arg);
            if (!is_subtype(arg_t, f->domain))
                throw TypeCheckError({"T-APP", line, "argument type mismatch",
                                      f->domain->to_string(), arg_t->to_string()});
            return {make_term(Term{Term::App{fn, arg}, line}), f->codomain};
        }
        if (auto* l = std::get_if<Term::Let>(&term.node)) {
            auto [bound, bound_t] = check(ctx, l->bound);
            ctx.emplace_back(l->var, bound_t);
            auto [body, body_t] = check(ctx, l->body);
            ctx.pop_back();
            return {make_term(Term{Term::Let{l->var, bound, body}, line}), body_t};
        }
        if (auto* fx = std::get_if<Term::Fix>(&term.node)) {
            auto [inner, inner_t] = check(ctx, fx->inner);
            auto* f = std::get_if<Type::Func>(&inner_t->node);
            if (!f || !is_subtype(f->codomain, f->domain))
                throw TypeCheckError({"T-FIX", line, "fix requires a term of type T -> T",
                                      "T -> T", inner_t->to_string()});
            return {make_term(Term{Term::Fix{inner}, line}), f->domain};
        }
        if (auto* i = std::get_if<Term::If>(&term.node)) {
            auto [cond, cond_t] = check(ctx, i->cond);
            if (!is_subtype(cond_t, Type::boolean()))
                throw TypeCheckError(
                    {"T-IF", line, "condition must be bool", "bool", cond_t->to_string()});
            auto [th, th_t] = check(ctx, i->then_branch);
            auto [el, el_t] = check(ctx, i->else_branch);
            auto [joined, new_shapes] = lub_r(resolver(), th_t, el_t, line);
            merge_shapes(fresh, new_shapes);
            return {make_term(Term{Term::If{cond, th, el}, line}), joined};
        }
        if (auto* c = std::get_if<Term::Cons>(&term.node)) {
            auto [head, head_t] = check(ctx, c->head);
            auto [tail, tail_t] = check(ctx, c->tail);
            auto* lt = std::get_if<Type::List>(&tail_t->node);
            if (!lt)
                throw TypeCheckError({"T-CONS", line, "second argument of cons must be a list",
                                      "T list", tail_t->to_string()});
            TypePtr elem;
            if (is_subtype(head_t, lt->elem)) {
                elem = lt->elem;
            } else if (is_subtype(lt->elem, head_t)) {
                elem = head_t;
            } else {
                auto [joined, new_shapes] = lub_r(resolver(), head_t, lt->elem, line);
                merge_shapes(fresh, new_shapes);
                elem = joined;
            }
            return {make_term(Term{Term::Cons{head, tail}, line}), Type::list(elem)};
        }
        if (auto* nu = std::get_if<Term::Null>(&term.node)) {
            auto [list, list_t] = check(ctx, nu->list);
            if (!std::holds_alternative<Type::List>(list_t->node))
                throw TypeCheckError(
                    {"T-NULL", line, "null expects a list", "T list", list_t->to_string()});
            return {make_term(Term{Term::Null{list}, line}), Type::boolean()};
        }
        if (auto* h = std::get_if<Term::Head>(&term.node)) {
            auto [list, list_t] = check(ctx, h->list);
            auto* lt = std::get_if<Type::List>(&list_t->node);
            if (!lt)
                throw TypeCheckError(
                    {"T-HEAD", line, "head expects a list", "T list", list_t->to_string()});
            return {make_term(Term{Term::Head{list, h->synthesized}, line}), lt->elem};
        }
        if (auto* tl = std::get_if<Term::Tail>(&term.node)) {
            auto [list, list_t] = check(ctx, tl->list);
            if (!std::holds_alternative<Type::List>(list_t->node))
                throw TypeCheckError(
                    {"T-TAIL", line, "tail expects a list", "T list", list_t->to_string()});
            return {make_term(Term{Term::Tail{list}, line}), list_t};
        }
        if (auto* r = std::get_if<Term::RecordTerm>(&term.node)) {
            std::vector<std::pair<std::string, TermPtr>> fields;
            std::vector<std::pair<std::string, TypePtr>> types;
            std::set<std::string> seen;
            for (const auto& [label, ft] : r->fields) {
                if (!seen.insert(label).second)
                    throw TypeCheckError(
                        {"T-RCD", line, "duplicate record label '" + label + "'", "", ""});
                auto [fe, ftype] = check(ctx, ft);
                fields.emplace_back(label, fe);
                types.emplace_back(label, ftype);
            }
            return {make_term(Term{Term::RecordTerm{std::move(fields)}, line}),
                    Type::record(std::move(types))};
        }
        if (auto* q = std::get_if<Term::QueryTerm>(&term.node)) {
            // T-QUERY: infer one shape per query variable; the type is a list
            // of records labelled by the answer variables.
            InferredShapeSet sq = infer_shapes(q->query, query_shape_id(q->query));
            merge_shapes(fresh, sq.shapes());
            std::vector<std::pair<std::string, TypePtr>> rec_fields;
            for (const auto& v : q->query.head)
                rec_fields.emplace_back(v, Type::shape(query_shape_name(q->query, v)));
            return {t, Type::list(Type::record(std::move(rec_fields)))};
        }

        const auto& p = std::get<Term::Proj>(term.node);
        auto [subject, subject_t] = check(ctx, p.subject);

        if (auto* rt = std::get_if<Type::Record>(&subject_t->node)) {
            auto* ident = std::get_if<std::string>(&p.label);
            if (ident) {
                for (const auto& [label, ft] : rt->fields) {
                    if (label == *ident)
                        return {make_term(Term{Term::Proj{subject, p.label, std::nullopt, false},
                                               line}),
                                ft};
                }
            }
            throw TypeCheckError({"T-RCDPROJ", line,
                                  "record has no field '" + label_to_string(p.label) + "'",
                                  subject_t->to_string(), ""});
        }

        if (auto* st = std::get_if<Type::Shape>(&subject_t->node)) {
            // T-NPROJ: fresh shape s' with constraint >=1 l-.s typed s' list;
            // when s proves exactly one successor on l the projection becomes
            // head (t.l) of type s' (T-NPROJ-1).
            PathPtr path = label_as_path(p.label);
            std::string fresh_name = node_proj_shape_name(path, st->name);
            if (!fresh.count(fresh_name) && !ambient.count(fresh_name)) {
                Shape s;
                s.name = fresh_name;
                s.constraint = Constraint::at_least(1, PathExpr::inverse(path),
                                                    Constraint::ref(st->name));
                fresh.emplace(fresh_name, std::move(s));
            }
            bool single = false;
            if (!p.elaborated) {
                const Shape* base = find_shape(st->name);
                if (base) {
                    bool has_min = false, has_max = false;
                    for (const auto& conj : conjuncts(base->constraint)) {
                        if (auto* al = std::get_if<Constraint::AtLeast>(&conj->node)) {
                            if (al->count >= 1 && path_equal(al->path, path)) has_min = true;
                        } else if (auto* no = std::get_if<Constraint::Not>(&conj->node)) {
                            auto* inner = std::get_if<Constraint::AtLeast>(&no->inner->node);
                            if (inner && inner->count == 2 && path_equal(inner->path, path) &&
                                std::holds_alternative<Constraint::Top>(inner->inner->node))
                                has_max = true;
                        }
                    }
                    single = has_min && has_max;
                }
            }
            TermPtr proj = make_term(
                Term{Term::Proj{subject, p.label, fresh_name, p.elaborated || single}, line});
            if (single)
                return {make_term(Term{Term::Head{proj, true}, line}), Type::shape(fresh_name)};
            return {proj, Type::list(Type::shape(fresh_name))};
        }

        throw TypeCheckError({"T-NPROJ", line, "projection requires a record or graph-node type",
                              "a record or shape type", subject_t->to_string()});
    }
};

}  // namespace

bool subtype(const ShapeSet& shapes, const TypePtr& t1, const TypePtr& t2) {
    Resolver r = make_resolver(shapes);
    return subtype_r(r, t1, t2);
}

bool shape_subsumes(const ShapeSet& shapes, const std::string& s1, const std::string& s2) {
    Resolver r = make_resolver(shapes);
    SubsumeCtx ctx{r};
    return subsumes_names(ctx, s1, s2, {});
}

std::pair<TypePtr, ShapeSet> lub(const ShapeSet& shapes, const TypePtr& t1, const TypePtr& t2) {
    Resolver r = make_resolver(shapes);
    return lub_r(r, t1, t2, 0);
}

std::pair<TypePtr, ShapeSet> glb(const ShapeSet& shapes, const TypePtr& t1, const TypePtr& t2) {
    Resolver r = make_resolver(shapes);
    return glb_r(r, t1, t2, 0);
}

TypingResult typecheck(const ShapeSet& shapes, const TypingContext& ctx, const TermPtr& t,
                       const std::map<Node, std::string>* node_typing) {
    Checker checker{shapes, node_typing, {}};
    TypingContext mutable_ctx = ctx;
    auto [elaborated, type] = checker.check(mutable_ctx, t);
    return TypingResult{elaborated, type, std::move(checker.fresh)};
}

TypingResult typecheck_program(const ShapeSet& ambient, const ShapeSet& program_shapes,
                               const TermPtr& t) {
    ShapeSet combined = ambient;
    for (const auto& [name, s] : program_shapes) {
        if (!combined.emplace(name, s).second)
            throw TypeCheckError({"T-PROGRAM", 0,
                                  "program shape '" + name + "' collides with an ambient shape",
                                  "", ""});
    }
    check_shape_refs(combined);
    return typecheck(combined, {}, t);
}

}  // namespace tycus
