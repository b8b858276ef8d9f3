#include "tycus/pcq.hpp"

#include <algorithm>

#include "parsers.hpp"

namespace tycus {

PathPtr PathExpr::iri(std::string name) {
    return std::make_shared<PathExpr>(PathExpr{Iri{std::move(name)}});
}
PathPtr PathExpr::inverse(PathPtr r) {
    return std::make_shared<PathExpr>(PathExpr{Inverse{std::move(r)}});
}
PathPtr PathExpr::seq(PathPtr a, PathPtr b) {
    return std::make_shared<PathExpr>(PathExpr{Seq{std::move(a), std::move(b)}});
}
PathPtr PathExpr::plus(PathPtr r) {
    return std::make_shared<PathExpr>(PathExpr{Plus{std::move(r)}});
}

namespace {

std::string postfix_operand(const PathPtr& p) {
    std::string s = p->to_string();
    if (std::holds_alternative<PathExpr::Seq>(p->node)) return "(" + s + ")";
    return s;
}

}  // namespace

std::string PathExpr::to_string() const {
    if (auto* i = std::get_if<Iri>(&node)) return i->name;
    if (auto* inv = std::get_if<Inverse>(&node)) return postfix_operand(inv->inner) + "-";
    if (auto* p = std::get_if<Plus>(&node)) return postfix_operand(p->inner) + "+";
    const auto& s = std::get<Seq>(node);
    // '/' is left-associative: only a right operand that is itself a sequence
    // needs parentheses.
    std::string right = s.right->to_string();
    if (std::holds_alternative<Seq>(s.right->node)) right = "(" + right + ")";
    return s.left->to_string() + "/" + right;
}

bool path_equal(const PathPtr& a, const PathPtr& b) {
    return a->to_string() == b->to_string();
}

namespace {

PathPtr parse_path_postfix(detail::Lexer& lex) {
    PathPtr base;
    if (lex.accept_punct("(")) {
        base = detail::parse_path_tokens(lex);
        lex.expect_punct(")");
    } else {
        base = PathExpr::iri(lex.expect_word());
    }
    for (;;) {
        if (lex.accept_punct("-")) {
            base = PathExpr::inverse(base);
        } else if (lex.accept_punct("+")) {
            base = PathExpr::plus(base);
        } else {
            break;
        }
    }
    return base;
}

}  // namespace

namespace detail {

PathPtr parse_path_tokens(Lexer& lex) {
    PathPtr left = parse_path_postfix(lex);
    while (lex.accept_punct("/")) {
        PathPtr right = parse_path_postfix(lex);
        left = PathExpr::seq(left, right);
    }
    return left;
}

}  // namespace detail

PathPtr parse_path(const std::string& text) {
    detail::Lexer lex(text);
    PathPtr p = detail::parse_path_tokens(lex);
    if (!lex.at_end())
        throw ParseError("trailing input after path expression: '" +
                             detail::Lexer::describe(lex.peek()) + "'",
                         lex.peek().line);
    return p;
}

std::string Pattern::to_string() const {
    if (auto* sv = std::get_if<SubjVar>(&node))
        return sv->var + " " + sv->path->to_string() + " " + sv->value.to_string();
    if (auto* ov = std::get_if<ObjVar>(&node))
        return ov->value.to_string() + " " + ov->path->to_string() + " " + ov->var;
    const auto& tv = std::get<TwoVars>(node);
    return tv.subj + " " + tv.path->to_string() + " " + tv.obj;
}

std::set<VarName> Pattern::vars() const {
    if (auto* sv = std::get_if<SubjVar>(&node)) return {sv->var};
    if (auto* ov = std::get_if<ObjVar>(&node)) return {ov->var};
    const auto& tv = std::get<TwoVars>(node);
    return {tv.subj, tv.obj};
}

std::set<VarName> Pcq::vars() const {
    std::set<VarName> out;
    for (const auto& p : body) {
        auto vs = p.vars();
        out.insert(vs.begin(), vs.end());
    }
    return out;
}

std::string Pcq::to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < head.size(); ++i) {
        if (i) out += ",";
        out += head[i];
    }
    out += ") <- ";
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (i) out += " ^ ";
        out += body[i].to_string();
    }
    return out;
}

bool pcq_equal(const Pcq& a, const Pcq& b) {
    return a.to_string() == b.to_string();
}

namespace {

bool is_variable_token(const detail::Token& t) {
    if (t.kind != detail::Token::Word) return false;
    const std::string& s = t.text;
    if (s[0] == '?') return s.size() > 1;
    if (!std::islower(static_cast<unsigned char>(s[0]))) return false;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

// Subject/object position: either a variable name or a node constant.
struct Endpoint {
    bool is_var;
    VarName var;
    Node value;
};

Endpoint parse_endpoint(detail::Lexer& lex) {
    const auto& t = lex.peek();
    switch (t.kind) {
        case detail::Token::String:
            lex.next();
            return {false, "", Node::literal(t.text)};
        case detail::Token::Number:
            lex.next();
            return {false, "", Node::literal(t.text)};
        case detail::Token::BlankNode:
            lex.next();
            return {false, "", Node::blank(t.text)};
        case detail::Token::Word:
            lex.next();
            if (is_variable_token(t)) return {true, t.text, Node()};
            return {false, "", Node::iri(t.text)};
        default:
            throw ParseError("expected variable or node, got '" + detail::Lexer::describe(t) + "'",
                             t.line);
    }
}

}  // namespace

namespace detail {

Pattern parse_pattern(Lexer& lex) {
    Endpoint subj = parse_endpoint(lex);
    PathPtr path = parse_path_tokens(lex);
    Endpoint obj = parse_endpoint(lex);

    if (subj.is_var && obj.is_var)
        return Pattern{Pattern::TwoVars{subj.var, path, obj.var}};
    if (subj.is_var)
        return Pattern{Pattern::SubjVar{subj.var, path, obj.value}};
    if (obj.is_var)
        return Pattern{Pattern::ObjVar{subj.value, path, obj.var}};
    throw ParseError("pattern with constants in both positions is not a PCQ pattern",
                     lex.peek().line);
}

Pcq parse_query_tokens(Lexer& lex) {
    Pcq q;
    lex.expect_punct("(");
    if (!lex.accept_punct(")")) {
        for (;;) {
            std::string v = lex.expect_word();
            q.head.push_back(v);
            if (lex.accept_punct(")")) break;
            lex.expect_punct(",");
        }
    }
    if (q.head.empty()) throw ParseError("query head must name at least one variable");
    lex.expect_punct("<-");
    q.body.push_back(parse_pattern(lex));
    while (lex.accept_punct("^")) q.body.push_back(parse_pattern(lex));

    std::set<VarName> seen;
    for (const auto& v : q.head) {
        if (!seen.insert(v).second) throw ParseError("duplicate head variable '" + v + "'");
    }
    auto body_vars = q.vars();
    for (const auto& v : q.head) {
        if (!body_vars.count(v))
            throw ParseError("head variable '" + v + "' not in body");
    }
    return q;
}

}  // namespace detail

Pcq parse_query(const std::string& text) {
    detail::Lexer lex(text);
    Pcq q = detail::parse_query_tokens(lex);
    if (!lex.at_end())
        throw ParseError("trailing input after query: '" + detail::Lexer::describe(lex.peek()) + "'",
                         lex.peek().line);
    return q;
}

namespace {

using PairSet = std::set<std::pair<Node, Node>>;

PairSet compose(const PairSet& a, const PairSet& b) {
    std::map<Node, std::vector<Node>> by_first;
    for (const auto& [x, y] : b) by_first[x].push_back(y);
    PairSet out;
    for (const auto& [x, y] : a) {
        auto it = by_first.find(y);
        if (it == by_first.end()) continue;
        for (const auto& z : it->second) out.emplace(x, z);
    }
    return out;
}

}  // namespace

std::set<std::pair<Node, Node>> eval_path(const PathPtr& r, const RdfGraph& g) {
    if (auto* i = std::get_if<PathExpr::Iri>(&r->node)) {
        PairSet out;
        for (const auto& e : g.edges(Node::iri(i->name))) out.insert(e);
        return out;
    }
    if (auto* inv = std::get_if<PathExpr::Inverse>(&r->node)) {
        PairSet out;
        for (const auto& [x, y] : eval_path(inv->inner, g)) out.emplace(y, x);
        return out;
    }
    if (auto* s = std::get_if<PathExpr::Seq>(&r->node))
        return compose(eval_path(s->left, g), eval_path(s->right, g));

    // Plus: closure to fixpoint; pairs are materialized, so cycles terminate.
    const auto& p = std::get<PathExpr::Plus>(r->node);
    PairSet base = eval_path(p.inner, g);
    PairSet closure = base;
    PairSet frontier = base;
    while (!frontier.empty()) {
        PairSet next = compose(frontier, base);
        PairSet fresh;
        for (const auto& pr : next)
            if (!closure.count(pr)) fresh.insert(pr);
        closure.insert(fresh.begin(), fresh.end());
        frontier = std::move(fresh);
    }
    return closure;
}

const std::set<std::pair<Node, Node>>& PathCache::get(const PathPtr& r, const RdfGraph& g) {
    std::string key = r->to_string();
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(std::move(key), eval_path(r, g)).first->second;
}

MappingSet join_mappings(const MappingSet& a, const MappingSet& b) {
    MappingSet out;
    for (const auto& m1 : a) {
        for (const auto& m2 : b) {
            bool compatible = true;
            for (const auto& [k, v] : m1) {
                auto it = m2.find(k);
                if (it != m2.end() && !(it->second == v)) {
                    compatible = false;
                    break;
                }
            }
            if (!compatible) continue;
            Mapping merged = m1;
            merged.insert(m2.begin(), m2.end());
            out.insert(std::move(merged));
        }
    }
    return out;
}

namespace {

MappingSet eval_pattern(const Pattern& p, const RdfGraph& g, PathCache& cache) {
    MappingSet out;
    if (auto* sv = std::get_if<Pattern::SubjVar>(&p.node)) {
        for (const auto& [x, y] : cache.get(sv->path, g))
            if (y == sv->value) out.insert(Mapping{{sv->var, x}});
    } else if (auto* ov = std::get_if<Pattern::ObjVar>(&p.node)) {
        for (const auto& [x, y] : cache.get(ov->path, g))
            if (x == ov->value) out.insert(Mapping{{ov->var, y}});
    } else {
        const auto& tv = std::get<Pattern::TwoVars>(p.node);
        for (const auto& [x, y] : cache.get(tv.path, g)) {
            if (tv.subj == tv.obj) {
                if (x == y) out.insert(Mapping{{tv.subj, x}});
            } else {
                out.insert(Mapping{{tv.subj, x}, {tv.obj, y}});
            }
        }
    }
    return out;
}

}  // namespace

MappingSet eval_query(const Pcq& q, const RdfGraph& g, PathCache& cache) {
    MappingSet result;
    bool first = true;
    for (const auto& p : q.body) {
        MappingSet ms = eval_pattern(p, g, cache);
        if (first) {
            result = std::move(ms);
            first = false;
        } else {
            result = join_mappings(result, ms);
        }
        if (result.empty()) return {};
    }
    MappingSet projected;
    for (const auto& m : result) {
        Mapping proj;
        for (const auto& v : q.head) {
            auto it = m.find(v);
            if (it != m.end()) proj.emplace(v, it->second);
        }
        projected.insert(std::move(proj));
    }
    return projected;
}

MappingSet eval_query(const Pcq& q, const RdfGraph& g) {
    PathCache cache;
    return eval_query(q, g, cache);
}

}  // namespace tycus
