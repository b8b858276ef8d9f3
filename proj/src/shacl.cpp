#include "tycus/shacl.hpp"

#include <algorithm>
#include <functional>

#include "parsers.hpp"

namespace tycus {

ConstraintPtr Constraint::top() { return std::make_shared<Constraint>(Constraint{Top{}}); }
ConstraintPtr Constraint::ref(std::string name) {
    return std::make_shared<Constraint>(Constraint{ShapeRef{std::move(name)}});
}
ConstraintPtr Constraint::constant(Node v) {
    return std::make_shared<Constraint>(Constraint{NodeConst{std::move(v)}});
}
ConstraintPtr Constraint::conj(ConstraintPtr a, ConstraintPtr b) {
    return std::make_shared<Constraint>(Constraint{And{std::move(a), std::move(b)}});
}
ConstraintPtr Constraint::neg(ConstraintPtr a) {
    return std::make_shared<Constraint>(Constraint{Not{std::move(a)}});
}
ConstraintPtr Constraint::at_least(int n, PathPtr r, ConstraintPtr inner) {
    if (n < 1) throw std::invalid_argument(">=n requires n >= 1");
    return std::make_shared<Constraint>(Constraint{AtLeast{n, std::move(r), std::move(inner)}});
}
ConstraintPtr Constraint::at_most(int n, PathPtr r, ConstraintPtr inner) {
    return neg(at_least(n + 1, std::move(r), std::move(inner)));
}
ConstraintPtr Constraint::exactly(int n, PathPtr r, ConstraintPtr inner) {
    return conj(at_most(n, r, inner), at_least(n, r, inner));
}
ConstraintPtr Constraint::disj(ConstraintPtr a, ConstraintPtr b) {
    return neg(conj(neg(std::move(a)), neg(std::move(b))));
}

namespace {

// Printing precedence: `and` chains are the only place parentheses are needed
// below `not` / `>=n r .` operands.
std::string print_operand(const ConstraintPtr& c) {
    std::string s = c->to_string();
    if (std::holds_alternative<Constraint::And>(c->node)) return "(" + s + ")";
    return s;
}

}  // namespace

std::string Constraint::to_string() const {
    if (std::holds_alternative<Top>(node)) return "top";
    if (auto* r = std::get_if<ShapeRef>(&node)) return "ref " + r->name;
    if (auto* v = std::get_if<NodeConst>(&node)) return "node " + v->value.to_string();
    if (auto* a = std::get_if<And>(&node))
        return a->left->to_string() + " and " + print_operand(a->right);
    if (auto* n = std::get_if<Not>(&node)) return "not " + print_operand(n->inner);
    const auto& al = std::get<AtLeast>(node);
    return ">=" + std::to_string(al.count) + " " + al.path->to_string() + " . " +
           print_operand(al.inner);
}

namespace {

void collect_conjuncts(const ConstraintPtr& c, std::vector<ConstraintPtr>& out) {
    if (auto* a = std::get_if<Constraint::And>(&c->node)) {
        collect_conjuncts(a->left, out);
        collect_conjuncts(a->right, out);
        return;
    }
    if (std::holds_alternative<Constraint::Top>(c->node)) return;
    out.push_back(c);
}

}  // namespace

ConstraintPtr canon_constraint(const ConstraintPtr& c) {
    if (auto* n = std::get_if<Constraint::Not>(&c->node))
        return Constraint::neg(canon_constraint(n->inner));
    if (auto* al = std::get_if<Constraint::AtLeast>(&c->node))
        return Constraint::at_least(al->count, al->path, canon_constraint(al->inner));
    if (std::holds_alternative<Constraint::And>(c->node)) {
        std::vector<ConstraintPtr> parts;
        collect_conjuncts(c, parts);
        for (auto& p : parts) p = canon_constraint(p);
        std::sort(parts.begin(), parts.end(),
                  [](const ConstraintPtr& a, const ConstraintPtr& b) {
                      return a->to_string() < b->to_string();
                  });
        parts.erase(std::unique(parts.begin(), parts.end(),
                                [](const ConstraintPtr& a, const ConstraintPtr& b) {
                                    return a->to_string() == b->to_string();
                                }),
                    parts.end());
        if (parts.empty()) return Constraint::top();
        ConstraintPtr acc = parts[0];
        for (std::size_t i = 1; i < parts.size(); ++i) acc = Constraint::conj(acc, parts[i]);
        return acc;
    }
    return c;
}

std::vector<ConstraintPtr> conjuncts(const ConstraintPtr& c) {
    std::vector<ConstraintPtr> out;
    collect_conjuncts(canon_constraint(c), out);
    return out;
}

bool constraint_equal(const ConstraintPtr& a, const ConstraintPtr& b) {
    return canon_constraint(a)->to_string() == canon_constraint(b)->to_string();
}

namespace {

Node parse_node_operand(detail::Lexer& lex) {
    const auto& t = lex.peek();
    switch (t.kind) {
        case detail::Token::String:
            lex.next();
            return Node::literal(t.text);
        case detail::Token::Number:
            lex.next();
            return Node::literal(t.text);
        case detail::Token::BlankNode:
            lex.next();
            return Node::blank(t.text);
        case detail::Token::Word:
            lex.next();
            return Node::iri(t.text);
        default:
            throw ParseError("expected node after 'node', got '" + detail::Lexer::describe(t) + "'",
                             t.line);
    }
}

ConstraintPtr parse_constraint_expr(detail::Lexer& lex);

int parse_count(detail::Lexer& lex) {
    const auto& t = lex.peek();
    if (t.kind != detail::Token::Number)
        throw ParseError("expected count after cardinality operator", t.line);
    lex.next();
    return std::stoi(t.text);
}

ConstraintPtr parse_constraint_unary(detail::Lexer& lex) {
    if (lex.accept_word("not")) return Constraint::neg(parse_constraint_unary(lex));
    if (lex.accept_word("top")) return Constraint::top();
    if (lex.accept_word("ref")) return Constraint::ref(lex.expect_word());
    if (lex.accept_word("node")) return Constraint::constant(parse_node_operand(lex));
    if (lex.accept_punct("(")) {
        ConstraintPtr c = parse_constraint_expr(lex);
        lex.expect_punct(")");
        return c;
    }
    const auto& t = lex.peek();
    if (t.kind == detail::Token::Punct && (t.text == ">=" || t.text == "<=" || t.text == "=")) {
        std::string op = t.text;
        lex.next();
        int n = parse_count(lex);
        PathPtr path = detail::parse_path_tokens(lex);
        lex.expect_punct(".");
        ConstraintPtr inner = parse_constraint_unary(lex);
        if (op == ">=") return Constraint::at_least(n, path, inner);
        if (op == "<=") return Constraint::at_most(n, path, inner);
        if (n < 1) throw ParseError("=n requires n >= 1", t.line);
        return Constraint::exactly(n, path, inner);
    }
    throw ParseError("expected constraint, got '" + detail::Lexer::describe(t) + "'", t.line);
}

ConstraintPtr parse_constraint_conj(detail::Lexer& lex) {
    ConstraintPtr left = parse_constraint_unary(lex);
    while (lex.accept_word("and")) left = Constraint::conj(left, parse_constraint_unary(lex));
    return left;
}

ConstraintPtr parse_constraint_expr(detail::Lexer& lex) {
    ConstraintPtr left = parse_constraint_conj(lex);
    while (lex.accept_word("or")) left = Constraint::disj(left, parse_constraint_conj(lex));
    return left;
}

}  // namespace

ConstraintPtr parse_constraint(const std::string& text) {
    detail::Lexer lex(text);
    ConstraintPtr c = parse_constraint_expr(lex);
    if (!lex.at_end())
        throw ParseError("trailing input after constraint: '" +
                             detail::Lexer::describe(lex.peek()) + "'",
                         lex.peek().line);
    return c;
}

namespace detail {

ConstraintPtr parse_constraint_tokens(Lexer& lex) { return parse_constraint_expr(lex); }

ShapeSet parse_shape_block(Lexer& lex) {
    ShapeSet shapes;
    while (lex.peek().kind == Token::Word && lex.peek().text == "shape") {
        int line = lex.peek().line;
        lex.next();
        Shape s;
        s.name = lex.expect_word();
        if (lex.accept_word("target")) {
            Pcq target = parse_query_tokens(lex);
            if (target.head.size() != 1)
                throw ParseError("shape target must have exactly one head variable", line);
            s.target = std::move(target);
        }
        if (!lex.accept_word("constraint"))
            throw ParseError("expected 'constraint' in shape declaration", lex.peek().line);
        s.constraint = parse_constraint_expr(lex);
        if (shapes.count(s.name)) throw ParseError("duplicate shape name '" + s.name + "'", line);
        shapes.emplace(s.name, std::move(s));
    }
    return shapes;
}

}  // namespace detail

ShapeSet parse_shape_decls(const std::string& text) {
    detail::Lexer lex(text);
    ShapeSet shapes = detail::parse_shape_block(lex);
    if (!lex.at_end())
        throw ParseError("expected 'shape', got '" + detail::Lexer::describe(lex.peek()) + "'",
                         lex.peek().line);
    return shapes;
}

namespace {

void collect_refs(const ConstraintPtr& c, std::set<std::string>& out) {
    if (auto* r = std::get_if<Constraint::ShapeRef>(&c->node)) {
        out.insert(r->name);
    } else if (auto* a = std::get_if<Constraint::And>(&c->node)) {
        collect_refs(a->left, out);
        collect_refs(a->right, out);
    } else if (auto* n = std::get_if<Constraint::Not>(&c->node)) {
        collect_refs(n->inner, out);
    } else if (auto* al = std::get_if<Constraint::AtLeast>(&c->node)) {
        collect_refs(al->inner, out);
    }
}

}  // namespace

void check_shape_refs(const ShapeSet& shapes) {
    for (const auto& [name, shape] : shapes) {
        std::set<std::string> refs;
        collect_refs(shape.constraint, refs);
        for (const auto& r : refs) {
            if (!shapes.count(r))
                throw ParseError("shape '" + name + "' references undefined shape '" + r + "'");
        }
    }
}

ShapeSet parse_shapes(const std::string& text) {
    ShapeSet shapes = parse_shape_decls(text);
    check_shape_refs(shapes);
    return shapes;
}

std::string serialize_shapes(const ShapeSet& shapes) {
    std::string out;
    for (const auto& [name, s] : shapes) {
        out += "shape " + name;
        if (s.target) out += " target " + s.target->to_string();
        out += " constraint " + s.constraint->to_string() + "\n";
    }
    return out;
}

void Assignment::retract(const Node& v, const std::string& shape) {
    auto it = positive_.find(v);
    if (it == positive_.end()) return;
    it->second.erase(shape);
    if (it->second.empty()) positive_.erase(it);
}

bool Assignment::contains(const Node& v, const std::string& shape) const {
    auto it = positive_.find(v);
    return it != positive_.end() && it->second.count(shape) > 0;
}

bool Assignment::operator==(const Assignment& o) const {
    return shape_names_ == o.shape_names_ && positive_ == o.positive_;
}

const std::set<Node>& InverseAssignment::nodes_of(const std::string& shape) const {
    static const std::set<Node> empty;
    auto it = by_shape_.find(shape);
    return it == by_shape_.end() ? empty : it->second;
}

InverseAssignment invert(const Assignment& sigma) {
    std::map<std::string, std::set<Node>> by_shape;
    for (const auto& s : sigma.shape_names()) by_shape[s];
    for (const auto& [v, names] : sigma.positive())
        for (const auto& s : names) by_shape[s].insert(v);
    return InverseAssignment(std::move(by_shape), sigma.universe());
}

Assignment invert(const InverseAssignment& sigma_inv) {
    std::set<std::string> names;
    for (const auto& [s, _] : sigma_inv.by_shape()) names.insert(s);
    Assignment out(std::move(names), sigma_inv.universe());
    for (const auto& [s, nodes] : sigma_inv.by_shape())
        for (const auto& v : nodes) out.assign(v, s);
    return out;
}

bool eval_constraint(const ConstraintPtr& c, const Node& v, const RdfGraph& g,
                     const Assignment& sigma, PathCache& cache) {
    if (std::holds_alternative<Constraint::Top>(c->node)) return true;
    if (auto* r = std::get_if<Constraint::ShapeRef>(&c->node)) return sigma.contains(v, r->name);
    if (auto* nc = std::get_if<Constraint::NodeConst>(&c->node)) return v == nc->value;
    if (auto* a = std::get_if<Constraint::And>(&c->node))
        return eval_constraint(a->left, v, g, sigma, cache) &&
               eval_constraint(a->right, v, g, sigma, cache);
    if (auto* n = std::get_if<Constraint::Not>(&c->node))
        return !eval_constraint(n->inner, v, g, sigma, cache);
    const auto& al = std::get<Constraint::AtLeast>(c->node);
    int count = 0;
    for (const auto& [x, y] : cache.get(al.path, g)) {
        if (!(x == v)) continue;
        if (eval_constraint(al.inner, y, g, sigma, cache)) {
            if (++count >= al.count) return true;
        }
    }
    return false;
}

bool eval_constraint(const ConstraintPtr& c, const Node& v, const RdfGraph& g,
                     const Assignment& sigma) {
    PathCache cache;
    return eval_constraint(c, v, g, sigma, cache);
}

namespace {

struct RefEdge {
    std::string to;
    bool through_not;
};

void collect_ref_edges(const ConstraintPtr& c, int neg_depth, std::vector<RefEdge>& out) {
    if (auto* r = std::get_if<Constraint::ShapeRef>(&c->node)) {
        out.push_back({r->name, neg_depth > 0});
    } else if (auto* a = std::get_if<Constraint::And>(&c->node)) {
        collect_ref_edges(a->left, neg_depth, out);
        collect_ref_edges(a->right, neg_depth, out);
    } else if (auto* n = std::get_if<Constraint::Not>(&c->node)) {
        collect_ref_edges(n->inner, neg_depth + 1, out);
    } else if (auto* al = std::get_if<Constraint::AtLeast>(&c->node)) {
        collect_ref_edges(al->inner, neg_depth, out);
    }
}

// Tarjan SCC over the shape-reference graph. Emission order has referenced
// shapes before their referrers, which is the evaluation order we need.
struct SccResult {
    std::vector<std::vector<std::string>> components;
};

SccResult shape_sccs(const ShapeSet& shapes, const std::map<std::string, std::vector<RefEdge>>& edges) {
    SccResult result;
    std::map<std::string, int> index, lowlink;
    std::set<std::string> on_stack;
    std::vector<std::string> stack;
    int counter = 0;

    std::function<void(const std::string&)> strongconnect = [&](const std::string& v) {
        index[v] = lowlink[v] = counter++;
        stack.push_back(v);
        on_stack.insert(v);
        auto it = edges.find(v);
        if (it != edges.end()) {
            for (const auto& e : it->second) {
                if (!shapes.count(e.to)) continue;
                if (!index.count(e.to)) {
                    strongconnect(e.to);
                    lowlink[v] = std::min(lowlink[v], lowlink[e.to]);
                } else if (on_stack.count(e.to)) {
                    lowlink[v] = std::min(lowlink[v], index[e.to]);
                }
            }
        }
        if (lowlink[v] == index[v]) {
            std::vector<std::string> comp;
            for (;;) {
                std::string w = stack.back();
                stack.pop_back();
                on_stack.erase(w);
                comp.push_back(w);
                if (w == v) break;
            }
            std::sort(comp.begin(), comp.end());
            result.components.push_back(std::move(comp));
        }
    };

    for (const auto& [name, _] : shapes)
        if (!index.count(name)) strongconnect(name);
    return result;
}

}  // namespace

ValidationResult compute_faithful_assignment(const ShapeSet& shapes, const RdfGraph& g) {
    for (const auto& [name, shape] : shapes) {
        std::set<std::string> refs;
        collect_refs(shape.constraint, refs);
        for (const auto& r : refs)
            if (!shapes.count(r))
                throw std::invalid_argument("shape '" + name + "' references undefined shape '" +
                                            r + "'");
    }

    PathCache cache;

    std::map<std::string, std::set<Node>> target_nodes;
    for (const auto& [name, shape] : shapes) {
        auto& nodes = target_nodes[name];
        if (!shape.target) continue;
        const std::string& var = shape.target->head.front();
        for (const auto& m : eval_query(*shape.target, g, cache)) nodes.insert(m.at(var));
    }

    std::map<std::string, std::vector<RefEdge>> edges;
    for (const auto& [name, shape] : shapes) collect_ref_edges(shape.constraint, 0, edges[name]);

    SccResult sccs = shape_sccs(shapes, edges);

    std::set<std::string> names;
    for (const auto& [n, _] : shapes) names.insert(n);
    Assignment sigma(names, g.nodes());

    for (const auto& comp : sccs.components) {
        std::set<std::string> members(comp.begin(), comp.end());
        bool has_internal_edge = false;
        for (const auto& m : comp) {
            for (const auto& e : edges[m]) {
                if (!members.count(e.to)) continue;
                has_internal_edge = true;
                if (e.through_not) {
                    std::string cycle;
                    for (const auto& c : comp) cycle += (cycle.empty() ? "" : ", ") + c;
                    throw StratificationError(
                        "shape reference cycle through negation involving: " + cycle);
                }
            }
        }
        (void)has_internal_edge;

        // Seed with target nodes, then close under constraint satisfaction.
        for (const auto& m : comp)
            for (const auto& v : target_nodes[m]) sigma.assign(v, m);
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& m : comp) {
                const auto& shape = shapes.at(m);
                for (const auto& v : g.nodes()) {
                    if (sigma.contains(v, m)) continue;
                    if (eval_constraint(shape.constraint, v, g, sigma, cache)) {
                        sigma.assign(v, m);
                        changed = true;
                    }
                }
            }
        }
    }

    // Faithfulness check: assigned nodes satisfy their constraints, unassigned
    // nodes violate them. Target coverage holds by seeding.
    std::vector<Violation> violations;
    for (const auto& [name, shape] : shapes) {
        for (const auto& v : g.nodes()) {
            bool in = sigma.contains(v, name);
            bool sat = eval_constraint(shape.constraint, v, g, sigma, cache);
            if (in && !sat) {
                for (const auto& conj : conjuncts(shape.constraint)) {
                    if (!eval_constraint(conj, v, g, sigma, cache))
                        violations.push_back({name, v, conj->to_string()});
                }
            } else if (!in && sat) {
                violations.push_back({name, v, "(satisfied but not derivable from targets)"});
            }
        }
    }

    if (!violations.empty()) return ValidationResult{std::nullopt, std::move(violations)};
    return ValidationResult{std::move(sigma), {}};
}

}  // namespace tycus
