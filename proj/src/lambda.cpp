#include "tycus/lambda.hpp"

#include <algorithm>

#include "parsers.hpp"
#include "tycus/inference.hpp"

namespace tycus {

TypePtr Type::shape(std::string name) {
    return std::make_shared<Type>(Type{Shape{std::move(name)}});
}
TypePtr Type::boolean() { return std::make_shared<Type>(Type{Bool{}}); }
TypePtr Type::func(TypePtr dom, TypePtr cod) {
    return std::make_shared<Type>(Type{Func{std::move(dom), std::move(cod)}});
}
TypePtr Type::list(TypePtr elem) { return std::make_shared<Type>(Type{List{std::move(elem)}}); }
TypePtr Type::record(std::vector<std::pair<std::string, TypePtr>> fields) {
    return std::make_shared<Type>(Type{Record{std::move(fields)}});
}

std::string Type::to_string() const {
    if (auto* s = std::get_if<Shape>(&node)) return s->name;
    if (std::holds_alternative<Bool>(node)) return "bool";
    if (auto* f = std::get_if<Func>(&node)) {
        std::string dom = f->domain->to_string();
        if (std::holds_alternative<Func>(f->domain->node)) dom = "(" + dom + ")";
        return dom + " -> " + f->codomain->to_string();
    }
    if (auto* l = std::get_if<List>(&node)) {
        std::string e = l->elem->to_string();
        if (std::holds_alternative<Func>(l->elem->node) ||
            std::holds_alternative<List>(l->elem->node))
            e = "(" + e + ")";
        return e + " list";
    }
    const auto& r = std::get<Record>(node);
    std::string out = "{";
    for (std::size_t i = 0; i < r.fields.size(); ++i) {
        if (i) out += ", ";
        out += r.fields[i].first + " : " + r.fields[i].second->to_string();
    }
    return out + "}";
}

namespace {

std::string canonical_type_string(const TypePtr& t) {
    if (auto* f = std::get_if<Type::Func>(&t->node))
        return "(" + canonical_type_string(f->domain) + "->" + canonical_type_string(f->codomain) +
               ")";
    if (auto* l = std::get_if<Type::List>(&t->node))
        return "[" + canonical_type_string(l->elem) + "]";
    if (auto* r = std::get_if<Type::Record>(&t->node)) {
        std::vector<std::string> fields;
        for (const auto& [l, ft] : r->fields) fields.push_back(l + ":" + canonical_type_string(ft));
        std::sort(fields.begin(), fields.end());
        std::string out = "{";
        for (const auto& f : fields) out += f + ";";
        return out + "}";
    }
    return t->to_string();
}

}  // namespace

bool type_equal(const TypePtr& a, const TypePtr& b) {
    return canonical_type_string(a) == canonical_type_string(b);
}

std::string label_to_string(const ProjLabel& l) {
    if (auto* s = std::get_if<std::string>(&l)) return *s;
    return "(" + std::get<PathPtr>(l)->to_string() + ")";
}

PathPtr label_as_path(const ProjLabel& l) {
    if (auto* s = std::get_if<std::string>(&l)) return PathExpr::iri(*s);
    return std::get<PathPtr>(l);
}

TermPtr make_term(Term t) { return std::make_shared<Term>(std::move(t)); }

namespace {

// Precedence levels for printing: 0 term, 1 application/prefix, 2 postfix, 3 atom.
std::string print_term(const TermPtr& t, int level);

std::string wrap(const std::string& s, bool need) { return need ? "(" + s + ")" : s; }

std::string print_term(const TermPtr& t, int level) {
    const Term& term = *t;
    if (auto* v = std::get_if<Term::Var>(&term.node)) return v->name;
    if (auto* b = std::get_if<Term::BoolLit>(&term.node)) return b->value ? "true" : "false";
    if (auto* n = std::get_if<Term::NodeLit>(&term.node)) return n->value.to_string();
    if (auto* nil = std::get_if<Term::NilLit>(&term.node))
        return "nil[" + nil->elem->to_string() + "]";
    if (auto* q = std::get_if<Term::QueryTerm>(&term.node))
        return "query { " + q->query.to_string() + " }";
    if (auto* r = std::get_if<Term::RecordTerm>(&term.node)) {
        std::string out = "{";
        for (std::size_t i = 0; i < r->fields.size(); ++i) {
            if (i) out += ", ";
            out += r->fields[i].first + " = " + print_term(r->fields[i].second, 0);
        }
        return out + "}";
    }
    if (auto* p = std::get_if<Term::Proj>(&term.node))
        return wrap(print_term(p->subject, 2) + "." + label_to_string(p->label), level > 2);

    if (auto* a = std::get_if<Term::App>(&term.node))
        return wrap(print_term(a->fn, 1) + " " + print_term(a->arg, 2), level > 1);
    if (auto* h = std::get_if<Term::Head>(&term.node))
        return wrap("head " + print_term(h->list, 2), level > 1);
    if (auto* tl = std::get_if<Term::Tail>(&term.node))
        return wrap("tail " + print_term(tl->list, 2), level > 1);
    if (auto* nu = std::get_if<Term::Null>(&term.node))
        return wrap("null " + print_term(nu->list, 2), level > 1);
    if (auto* f = std::get_if<Term::Fix>(&term.node))
        return wrap("fix " + print_term(f->inner, 2), level > 1);
    if (auto* c = std::get_if<Term::Cons>(&term.node))
        return wrap("cons " + print_term(c->head, 2) + " " + print_term(c->tail, 2), level > 1);

    if (auto* ab = std::get_if<Term::Abs>(&term.node))
        return wrap("\\(" + ab->var + ":" + ab->ann->to_string() + "). " + print_term(ab->body, 0),
                    level > 0);
    if (auto* l = std::get_if<Term::Let>(&term.node))
        return wrap("let " + l->var + " = " + print_term(l->bound, 0) + " in " +
                        print_term(l->body, 0),
                    level > 0);
    const auto& i = std::get<Term::If>(term.node);
    return wrap("if " + print_term(i.cond, 0) + " then " + print_term(i.then_branch, 0) +
                    " else " + print_term(i.else_branch, 0),
                level > 0);
}

}  // namespace

std::string Term::to_string() const {
    return print_term(std::make_shared<Term>(*this), 0);
}

bool is_value(const TermPtr& t) {
    if (std::holds_alternative<Term::BoolLit>(t->node) ||
        std::holds_alternative<Term::NodeLit>(t->node) ||
        std::holds_alternative<Term::NilLit>(t->node) ||
        std::holds_alternative<Term::Abs>(t->node))
        return true;
    if (auto* c = std::get_if<Term::Cons>(&t->node))
        return is_value(c->head) && is_value(c->tail);
    if (auto* r = std::get_if<Term::RecordTerm>(&t->node)) {
        for (const auto& [_, f] : r->fields)
            if (!is_value(f)) return false;
        return true;
    }
    return false;
}

std::set<std::string> free_vars(const TermPtr& t) {
    std::set<std::string> out;
    if (auto* v = std::get_if<Term::Var>(&t->node)) {
        out.insert(v->name);
    } else if (auto* a = std::get_if<Term::Abs>(&t->node)) {
        out = free_vars(a->body);
        out.erase(a->var);
    } else if (auto* ap = std::get_if<Term::App>(&t->node)) {
        out = free_vars(ap->fn);
        auto rhs = free_vars(ap->arg);
        out.insert(rhs.begin(), rhs.end());
    } else if (auto* l = std::get_if<Term::Let>(&t->node)) {
        out = free_vars(l->bound);
        auto body = free_vars(l->body);
        body.erase(l->var);
        out.insert(body.begin(), body.end());
    } else if (auto* f = std::get_if<Term::Fix>(&t->node)) {
        out = free_vars(f->inner);
    } else if (auto* i = std::get_if<Term::If>(&t->node)) {
        out = free_vars(i->cond);
        for (const auto& part : {i->then_branch, i->else_branch}) {
            auto vs = free_vars(part);
            out.insert(vs.begin(), vs.end());
        }
    } else if (auto* c = std::get_if<Term::Cons>(&t->node)) {
        out = free_vars(c->head);
        auto vs = free_vars(c->tail);
        out.insert(vs.begin(), vs.end());
    } else if (auto* nu = std::get_if<Term::Null>(&t->node)) {
        out = free_vars(nu->list);
    } else if (auto* h = std::get_if<Term::Head>(&t->node)) {
        out = free_vars(h->list);
    } else if (auto* tl = std::get_if<Term::Tail>(&t->node)) {
        out = free_vars(tl->list);
    } else if (auto* r = std::get_if<Term::RecordTerm>(&t->node)) {
        for (const auto& [_, f] : r->fields) {
            auto vs = free_vars(f);
            out.insert(vs.begin(), vs.end());
        }
    } else if (auto* p = std::get_if<Term::Proj>(&t->node)) {
        out = free_vars(p->subject);
    }
    return out;
}

namespace {

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
    std::string candidate = base + "'";
    int i = 1;
    while (avoid.count(candidate)) candidate = base + "'" + std::to_string(i++);
    return candidate;
}

}  // namespace

TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& replacement) {
    if (auto* v = std::get_if<Term::Var>(&t->node)) return v->name == x ? replacement : t;
    if (std::holds_alternative<Term::BoolLit>(t->node) ||
        std::holds_alternative<Term::NodeLit>(t->node) ||
        std::holds_alternative<Term::NilLit>(t->node) ||
        std::holds_alternative<Term::QueryTerm>(t->node))
        return t;

    if (auto* a = std::get_if<Term::Abs>(&t->node)) {
        if (a->var == x) return t;
        std::string var = a->var;
        TermPtr body = a->body;
        auto fv = free_vars(replacement);
        if (fv.count(var)) {
            auto avoid = fv;
            auto bodyfv = free_vars(body);
            avoid.insert(bodyfv.begin(), bodyfv.end());
            avoid.insert(x);
            std::string renamed = fresh_name(var, avoid);
            body = substitute(body, var, make_term(Term{Term::Var{renamed}}));
            var = renamed;
        }
        return make_term(Term{Term::Abs{var, a->ann, substitute(body, x, replacement)}, t->line});
    }
    if (auto* l = std::get_if<Term::Let>(&t->node)) {
        TermPtr bound = substitute(l->bound, x, replacement);
        if (l->var == x) return make_term(Term{Term::Let{l->var, bound, l->body}, t->line});
        std::string var = l->var;
        TermPtr body = l->body;
        auto fv = free_vars(replacement);
        if (fv.count(var)) {
            auto avoid = fv;
            auto bodyfv = free_vars(body);
            avoid.insert(bodyfv.begin(), bodyfv.end());
            avoid.insert(x);
            std::string renamed = fresh_name(var, avoid);
            body = substitute(body, var, make_term(Term{Term::Var{renamed}}));
            var = renamed;
        }
        return make_term(Term{Term::Let{var, bound, substitute(body, x, replacement)}, t->line});
    }

    auto sub = [&](const TermPtr& s) { return substitute(s, x, replacement); };
    if (auto* ap = std::get_if<Term::App>(&t->node))
        return make_term(Term{Term::App{sub(ap->fn), sub(ap->arg)}, t->line});
    if (auto* f = std::get_if<Term::Fix>(&t->node))
        return make_term(Term{Term::Fix{sub(f->inner)}, t->line});
    if (auto* i = std::get_if<Term::If>(&t->node))
        return make_term(
            Term{Term::If{sub(i->cond), sub(i->then_branch), sub(i->else_branch)}, t->line});
    if (auto* c = std::get_if<Term::Cons>(&t->node))
        return make_term(Term{Term::Cons{sub(c->head), sub(c->tail)}, t->line});
    if (auto* nu = std::get_if<Term::Null>(&t->node))
        return make_term(Term{Term::Null{sub(nu->list)}, t->line});
    if (auto* h = std::get_if<Term::Head>(&t->node))
        return make_term(Term{Term::Head{sub(h->list), h->synthesized}, t->line});
    if (auto* tl = std::get_if<Term::Tail>(&t->node))
        return make_term(Term{Term::Tail{sub(tl->list)}, t->line});
    if (auto* r = std::get_if<Term::RecordTerm>(&t->node)) {
        std::vector<std::pair<std::string, TermPtr>> fields;
        for (const auto& [l, f] : r->fields) fields.emplace_back(l, sub(f));
        return make_term(Term{Term::RecordTerm{std::move(fields)}, t->line});
    }
    const auto& p = std::get<Term::Proj>(t->node);
    return make_term(
        Term{Term::Proj{sub(p.subject), p.label, p.shape_hint, p.elaborated}, t->line});
}

std::string query_shape_id(const Pcq& q) { return "q" + content_hash(q.to_string()); }

std::string query_shape_name(const Pcq& q, const VarName& var) {
    return inferred_shape_name(query_shape_id(q), var);
}

std::string node_proj_shape_name(const PathPtr& path, const std::string& base) {
    return "np" + content_hash(path->to_string() + "|" + base);
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

using detail::Lexer;
using detail::Token;

const std::set<std::string>& term_keywords() {
    static const std::set<std::string> kw = {"let",  "letrec", "in",   "if",   "then", "else",
                                             "fix",  "head",   "tail", "null", "cons", "query",
                                             "nil",  "true",   "false"};
    return kw;
}

TypePtr parse_type_expr(Lexer& lex);

TypePtr parse_type_atom(Lexer& lex) {
    if (lex.accept_punct("(")) {
        TypePtr t = parse_type_expr(lex);
        lex.expect_punct(")");
        return t;
    }
    if (lex.accept_punct("{")) {
        std::vector<std::pair<std::string, TypePtr>> fields;
        if (!lex.accept_punct("}")) {
            for (;;) {
                std::string label = lex.expect_word();
                lex.expect_punct(":");
                fields.emplace_back(label, parse_type_expr(lex));
                if (lex.accept_punct("}")) break;
                lex.expect_punct(",");
            }
        }
        std::set<std::string> seen;
        for (const auto& [l, _] : fields)
            if (!seen.insert(l).second) throw ParseError("duplicate record type label '" + l + "'");
        return Type::record(std::move(fields));
    }
    if (lex.accept_word("bool")) return Type::boolean();
    std::string name = lex.expect_word();
    if (name == "list") throw ParseError("'list' must follow an element type");
    return Type::shape(name);
}

TypePtr parse_type_expr(Lexer& lex) {
    TypePtr t = parse_type_atom(lex);
    while (lex.accept_word("list")) t = Type::list(t);
    if (lex.accept_punct("->")) return Type::func(t, parse_type_expr(lex));
    return t;
}

struct TermParser {
    Lexer& lex;
    std::vector<std::string> scope;

    bool bound(const std::string& name) const {
        return std::find(scope.rbegin(), scope.rend(), name) != scope.rend();
    }

    bool starts_atom() const {
        const Token& t = lex.peek();
        switch (t.kind) {
            case Token::String:
            case Token::Number:
            case Token::BlankNode:
                return true;
            case Token::Punct:
                return t.text == "(" || t.text == "{";
            case Token::Word:
                if (t.text == "true" || t.text == "false" || t.text == "nil" || t.text == "query")
                    return true;
                return !term_keywords().count(t.text);
            default:
                return false;
        }
    }

    TermPtr parse_term() {
        int line = lex.peek().line;
        if (lex.accept_punct("\\")) {
            lex.expect_punct("(");
            std::string var = lex.expect_word();
            lex.expect_punct(":");
            TypePtr ann = parse_type_expr(lex);
            lex.expect_punct(")");
            lex.expect_punct(".");
            scope.push_back(var);
            TermPtr body = parse_term();
            scope.pop_back();
            return make_term(Term{Term::Abs{var, ann, body}, line});
        }
        if (lex.accept_word("let")) {
            std::string var = lex.expect_word();
            lex.expect_punct("=");
            TermPtr bound_term = parse_term();
            if (!lex.accept_word("in")) throw ParseError("expected 'in'", lex.peek().line);
            scope.push_back(var);
            TermPtr body = parse_term();
            scope.pop_back();
            return make_term(Term{Term::Let{var, bound_term, body}, line});
        }
        if (lex.accept_word("letrec")) {
            // letrec x:T = t1 in t2  ==  let x = fix (\(x:T). t1) in t2
            std::string var = lex.expect_word();
            lex.expect_punct(":");
            TypePtr ann = parse_type_expr(lex);
            lex.expect_punct("=");
            scope.push_back(var);
            TermPtr bound_term = parse_term();
            scope.pop_back();
            if (!lex.accept_word("in")) throw ParseError("expected 'in'", lex.peek().line);
            scope.push_back(var);
            TermPtr body = parse_term();
            scope.pop_back();
            TermPtr fixed = make_term(Term{
                Term::Fix{make_term(Term{Term::Abs{var, ann, bound_term}, line})}, line});
            return make_term(Term{Term::Let{var, fixed, body}, line});
        }
        if (lex.accept_word("if")) {
            TermPtr cond = parse_term();
            if (!lex.accept_word("then")) throw ParseError("expected 'then'", lex.peek().line);
            TermPtr then_branch = parse_term();
            if (!lex.accept_word("else")) throw ParseError("expected 'else'", lex.peek().line);
            TermPtr else_branch = parse_term();
            return make_term(Term{Term::If{cond, then_branch, else_branch}, line});
        }
        return parse_app();
    }

    TermPtr parse_app() {
        int line = lex.peek().line;
        if (lex.accept_word("head"))
            return make_term(Term{Term::Head{parse_postfix(), false}, line});
        if (lex.accept_word("tail")) return make_term(Term{Term::Tail{parse_postfix()}, line});
        if (lex.accept_word("null")) return make_term(Term{Term::Null{parse_postfix()}, line});
        if (lex.accept_word("fix")) return make_term(Term{Term::Fix{parse_postfix()}, line});
        if (lex.accept_word("cons")) {
            TermPtr h = parse_postfix();
            TermPtr t = parse_postfix();
            return make_term(Term{Term::Cons{h, t}, line});
        }
        TermPtr t = parse_postfix();
        while (starts_atom()) t = make_term(Term{Term::App{t, parse_postfix()}, line});
        return t;
    }

    TermPtr parse_postfix() {
        TermPtr t = parse_atom();
        while (lex.peek().kind == Token::Punct && lex.peek().text == ".") {
            int line = lex.peek().line;
            lex.next();
            ProjLabel label;
            if (lex.accept_punct("(")) {
                label = detail::parse_path_tokens(lex);
                lex.expect_punct(")");
            } else {
                label = lex.expect_word();
            }
            t = make_term(Term{Term::Proj{t, std::move(label), std::nullopt, false}, line});
        }
        return t;
    }

    TermPtr parse_atom() {
        const Token& tok = lex.peek();
        int line = tok.line;
        if (lex.accept_punct("(")) {
            TermPtr t = parse_term();
            lex.expect_punct(")");
            return t;
        }
        if (lex.accept_punct("{")) {
            std::vector<std::pair<std::string, TermPtr>> fields;
            if (!lex.accept_punct("}")) {
                for (;;) {
                    std::string label = lex.expect_word();
                    lex.expect_punct("=");
                    fields.emplace_back(label, parse_term());
                    if (lex.accept_punct("}")) break;
                    lex.expect_punct(",");
                }
            }
            std::set<std::string> seen;
            for (const auto& [l, _] : fields)
                if (!seen.insert(l).second)
                    throw ParseError("duplicate record label '" + l + "'", line);
            return make_term(Term{Term::RecordTerm{std::move(fields)}, line});
        }
        switch (tok.kind) {
            case Token::String:
                lex.next();
                return make_term(Term{Term::NodeLit{Node::literal(tok.text)}, line});
            case Token::Number:
                lex.next();
                return make_term(Term{Term::NodeLit{Node::literal(tok.text)}, line});
            case Token::BlankNode:
                lex.next();
                return make_term(Term{Term::NodeLit{Node::blank(tok.text)}, line});
            case Token::Word:
                break;
            default:
                throw ParseError("expected term, got '" + Lexer::describe(tok) + "'", line);
        }
        if (lex.accept_word("true")) return make_term(Term{Term::BoolLit{true}, line});
        if (lex.accept_word("false")) return make_term(Term{Term::BoolLit{false}, line});
        if (lex.accept_word("nil")) {
            lex.expect_punct("[");
            TypePtr elem = parse_type_expr(lex);
            lex.expect_punct("]");
            return make_term(Term{Term::NilLit{elem}, line});
        }
        if (lex.accept_word("query")) {
            lex.expect_punct("{");
            Pcq q = detail::parse_query_tokens(lex);
            lex.expect_punct("}");
            return make_term(Term{Term::QueryTerm{std::move(q)}, line});
        }
        std::string word = lex.expect_word();
        if (term_keywords().count(word))
            throw ParseError("unexpected keyword '" + word + "'", line);
        if (bound(word)) return make_term(Term{Term::Var{word}, line});
        return make_term(Term{Term::NodeLit{Node::iri(word)}, line});
    }
};

}  // namespace

TypePtr parse_type(const std::string& text) {
    detail::Lexer lex(text);
    TypePtr t = parse_type_expr(lex);
    if (!lex.at_end())
        throw ParseError("trailing input after type: '" + detail::Lexer::describe(lex.peek()) + "'",
                         lex.peek().line);
    return t;
}

std::pair<ShapeSet, TermPtr> parse_program(const std::string& text) {
    detail::Lexer lex(text);
    ShapeSet shapes = detail::parse_shape_block(lex);
    TermParser parser{lex, {}};
    TermPtr t = parser.parse_term();
    if (!lex.at_end())
        throw ParseError("trailing input after term: '" + detail::Lexer::describe(lex.peek()) + "'",
                         lex.peek().line);
    return {std::move(shapes), std::move(t)};
}

TermPtr parse_term(const std::string& text) {
    detail::Lexer lex(text);
    TermParser parser{lex, {}};
    TermPtr t = parser.parse_term();
    if (!lex.at_end())
        throw ParseError("trailing input after term: '" + detail::Lexer::describe(lex.peek()) + "'",
                         lex.peek().line);
    return t;
}

}  // namespace tycus
