#include "tycus/eval.hpp"

#include <algorithm>

#include "tycus/inference.hpp"

namespace tycus {

namespace {

StepOutcome stepped(TermPtr t) { return {StepOutcome::Stepped, std::move(t)}; }
StepOutcome value() { return {StepOutcome::IsValue, nullptr}; }
StepOutcome stuck(StuckKind k) { return {StepOutcome::Stuck, nullptr, k}; }

// Builds cons val1 (cons val2 ... nil[elem]) preserving the given order.
TermPtr build_list(std::vector<TermPtr> items, TypePtr elem) {
    TermPtr acc = make_term(Term{Term::NilLit{std::move(elem)}});
    for (auto it = items.rbegin(); it != items.rend(); ++it)
        acc = make_term(Term{Term::Cons{*it, acc}});
    return acc;
}

TermPtr eval_query_term(const Pcq& q, const RdfGraph& g) {
    MappingSet results = eval_query(q, g);
    std::vector<TermPtr> records;
    for (const auto& m : results) {
        std::vector<std::pair<std::string, TermPtr>> fields;
        for (const auto& v : q.head)
            fields.emplace_back(v, make_term(Term{Term::NodeLit{m.at(v)}}));
        records.push_back(make_term(Term{Term::RecordTerm{std::move(fields)}}));
    }
    std::vector<std::pair<std::string, TypePtr>> rec_fields;
    for (const auto& v : q.head)
        rec_fields.emplace_back(v, Type::shape(query_shape_name(q, v)));
    return build_list(std::move(records), Type::record(std::move(rec_fields)));
}

TermPtr eval_node_proj(const Node& v, const Term::Proj& proj, const RdfGraph& g) {
    PathPtr path = label_as_path(proj.label);
    std::set<Node> successors;
    for (const auto& [x, y] : eval_path(path, g))
        if (x == v) successors.insert(y);
    std::vector<TermPtr> items;
    for (const auto& n : successors) items.push_back(make_term(Term{Term::NodeLit{n}}));
    std::string elem_shape = proj.shape_hint
                                 ? *proj.shape_hint
                                 : "np" + content_hash(path->to_string() + "|node:" + v.to_string());
    return build_list(std::move(items), Type::shape(elem_shape));
}

}  // namespace

StepOutcome step(const TermPtr& t, const RdfGraph& g) {
    const Term& term = *t;

    if (std::holds_alternative<Term::Var>(term.node)) return stuck(StuckKind::Other);
    if (std::holds_alternative<Term::BoolLit>(term.node) ||
        std::holds_alternative<Term::NodeLit>(term.node) ||
        std::holds_alternative<Term::NilLit>(term.node) ||
        std::holds_alternative<Term::Abs>(term.node))
        return value();

    auto congruence = [&](const TermPtr& sub, auto rebuild) -> StepOutcome {
        StepOutcome r = step(sub, g);
        if (r.kind == StepOutcome::Stepped) return stepped(rebuild(r.next));
        return r;  // propagate stuckness upward
    };

    if (auto* a = std::get_if<Term::App>(&term.node)) {
        if (!is_value(a->fn))
            return congruence(a->fn, [&](TermPtr f) {
                return make_term(Term{Term::App{std::move(f), a->arg}});
            });
        if (!is_value(a->arg))
            return congruence(a->arg, [&](TermPtr x) {
                return make_term(Term{Term::App{a->fn, std::move(x)}});
            });
        if (auto* abs = std::get_if<Term::Abs>(&a->fn->node))
            return stepped(substitute(abs->body, abs->var, a->arg));
        return stuck(StuckKind::Other);
    }

    if (auto* l = std::get_if<Term::Let>(&term.node)) {
        if (!is_value(l->bound))
            return congruence(l->bound, [&](TermPtr b) {
                return make_term(Term{Term::Let{l->var, std::move(b), l->body}});
            });
        return stepped(substitute(l->body, l->var, l->bound));
    }

    if (auto* f = std::get_if<Term::Fix>(&term.node)) {
        if (!is_value(f->inner))
            return congruence(f->inner, [&](TermPtr i) {
                return make_term(Term{Term::Fix{std::move(i)}});
            });
        if (auto* abs = std::get_if<Term::Abs>(&f->inner->node))
            return stepped(substitute(abs->body, abs->var, t));
        return stuck(StuckKind::Other);
    }

    if (auto* i = std::get_if<Term::If>(&term.node)) {
        if (!is_value(i->cond))
            return congruence(i->cond, [&](TermPtr c) {
                return make_term(Term{Term::If{std::move(c), i->then_branch, i->else_branch}});
            });
        if (auto* b = std::get_if<Term::BoolLit>(&i->cond->node))
            return stepped(b->value ? i->then_branch : i->else_branch);
        return stuck(StuckKind::Other);
    }

    if (auto* c = std::get_if<Term::Cons>(&term.node)) {
        if (!is_value(c->head))
            return congruence(c->head, [&](TermPtr h) {
                return make_term(Term{Term::Cons{std::move(h), c->tail}});
            });
        return congruence(c->tail, [&](TermPtr tl) {
            return make_term(Term{Term::Cons{c->head, std::move(tl)}});
        });
    }

    if (auto* nu = std::get_if<Term::Null>(&term.node)) {
        if (!is_value(nu->list))
            return congruence(nu->list, [&](TermPtr l2) {
                return make_term(Term{Term::Null{std::move(l2)}});
            });
        if (std::holds_alternative<Term::NilLit>(nu->list->node))
            return stepped(make_term(Term{Term::BoolLit{true}}));
        if (std::holds_alternative<Term::Cons>(nu->list->node))
            return stepped(make_term(Term{Term::BoolLit{false}}));
        return stuck(StuckKind::Other);
    }

    if (auto* h = std::get_if<Term::Head>(&term.node)) {
        if (!is_value(h->list))
            return congruence(h->list, [&](TermPtr l2) {
                return make_term(Term{Term::Head{std::move(l2), h->synthesized}});
            });
        if (auto* cons = std::get_if<Term::Cons>(&h->list->node)) return stepped(cons->head);
        if (std::holds_alternative<Term::NilLit>(h->list->node)) return stuck(StuckKind::HeadNil);
        return stuck(StuckKind::Other);
    }

    if (auto* tl = std::get_if<Term::Tail>(&term.node)) {
        if (!is_value(tl->list))
            return congruence(tl->list, [&](TermPtr l2) {
                return make_term(Term{Term::Tail{std::move(l2)}});
            });
        if (auto* cons = std::get_if<Term::Cons>(&tl->list->node)) return stepped(cons->tail);
        if (std::holds_alternative<Term::NilLit>(tl->list->node)) return stuck(StuckKind::TailNil);
        return stuck(StuckKind::Other);
    }

    if (auto* r = std::get_if<Term::RecordTerm>(&term.node)) {
        for (std::size_t idx = 0; idx < r->fields.size(); ++idx) {
            if (is_value(r->fields[idx].second)) continue;
            return congruence(r->fields[idx].second, [&](TermPtr f) {
                auto fields = r->fields;
                fields[idx].second = std::move(f);
                return make_term(Term{Term::RecordTerm{std::move(fields)}});
            });
        }
        return value();  // unreachable: all-value records are values
    }

    if (auto* q = std::get_if<Term::QueryTerm>(&term.node))
        return stepped(eval_query_term(q->query, g));

    const auto& p = std::get<Term::Proj>(term.node);
    if (!is_value(p.subject))
        return congruence(p.subject, [&](TermPtr s) {
            return make_term(Term{Term::Proj{std::move(s), p.label, p.shape_hint, p.elaborated}});
        });
    if (auto* rec = std::get_if<Term::RecordTerm>(&p.subject->node)) {
        if (auto* ident = std::get_if<std::string>(&p.label)) {
            for (const auto& [l, val] : rec->fields)
                if (l == *ident) return stepped(val);
        }
        return stuck(StuckKind::Other);
    }
    if (auto* nl = std::get_if<Term::NodeLit>(&p.subject->node))
        return stepped(eval_node_proj(nl->value, p, g));
    return stuck(StuckKind::Other);
}

EvalResult evaluate(const TermPtr& t, const RdfGraph& g, long fuel) {
    TermPtr current = t;
    long steps = 0;
    for (;;) {
        StepOutcome r = step(current, g);
        switch (r.kind) {
            case StepOutcome::IsValue:
                return {EvalResult::Value, current, StuckKind::Other, steps};
            case StepOutcome::Stuck:
                return {EvalResult::Stuck, current, r.stuck, steps};
            case StepOutcome::Stepped:
                if (++steps > fuel) return {EvalResult::OutOfFuel, r.next, StuckKind::Other, steps};
                current = r.next;
                break;
        }
    }
}

}  // namespace tycus
