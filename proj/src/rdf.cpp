#include "tycus/rdf.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace tycus {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    bool seen_dot = false;
    for (char c : s) {
        if (c == '.' && !seen_dot) {
            seen_dot = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

std::string Node::to_string() const {
    switch (kind) {
        case NodeKind::Iri:
            return text;
        case NodeKind::Blank:
            return "_:" + text;
        case NodeKind::Literal:
            if (all_digits(text)) return text;
            return "\"" + text + "\"";
    }
    return text;
}

RdfGraph::RdfGraph(std::vector<Triple> triples) {
    for (auto& t : triples) {
        if (t.predicate.kind != NodeKind::Iri)
            throw std::invalid_argument("triple predicate must be an IRI");
        if (t.subject.kind == NodeKind::Literal)
            throw std::invalid_argument("triple subject must be an IRI or blank node");
        triples_.insert(std::move(t));
    }
    for (const auto& t : triples_) {
        nodes_.insert(t.subject);
        nodes_.insert(t.object);
        by_predicate_[t.predicate].emplace_back(t.subject, t.object);
    }
}

const std::vector<std::pair<Node, Node>>& RdfGraph::edges(const Node& predicate) const {
    static const std::vector<std::pair<Node, Node>> empty;
    auto it = by_predicate_.find(predicate);
    return it == by_predicate_.end() ? empty : it->second;
}

namespace {

// Splits one .nt line into node tokens, keeping quoted literals intact.
std::vector<std::string> tokenize_line(const std::string& line, int lineno) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '"') {
            std::size_t j = i + 1;
            while (j < line.size() && line[j] != '"') {
                if (line[j] == '\\' || line[j] == '\n')
                    throw ParseError("unsupported escape in literal", lineno);
                ++j;
            }
            if (j >= line.size()) throw ParseError("unterminated literal", lineno);
            tokens.push_back(line.substr(i, j - i + 1));
            i = j + 1;
        } else {
            std::size_t j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
            tokens.push_back(line.substr(i, j - i));
            i = j;
        }
    }
    return tokens;
}

Node parse_node_token(const std::string& tok, int lineno) {
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
        return Node::literal(tok.substr(1, tok.size() - 2));
    if (tok.rfind("_:", 0) == 0) {
        if (tok.size() == 2) throw ParseError("empty blank node id", lineno);
        return Node::blank(tok.substr(2));
    }
    if (all_digits(tok)) return Node::literal(tok);
    if (tok.empty()) throw ParseError("empty node token", lineno);
    return Node::iri(tok);
}

}  // namespace

RdfGraph parse_graph(const std::string& text) {
    std::vector<Triple> triples;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed = line;
        auto first = trimmed.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (trimmed[first] == '#') continue;

        auto tokens = tokenize_line(line, lineno);
        if (tokens.empty()) continue;
        if (tokens.back() != ".")
            throw ParseError("expected ' .' at end of triple", lineno);
        tokens.pop_back();
        if (tokens.size() != 3)
            throw ParseError("expected 'subject predicate object .'", lineno);

        Node s = parse_node_token(tokens[0], lineno);
        Node p = parse_node_token(tokens[1], lineno);
        Node o = parse_node_token(tokens[2], lineno);
        if (p.kind != NodeKind::Iri)
            throw ParseError("predicate must be an IRI, got '" + tokens[1] + "'", lineno);
        if (s.kind == NodeKind::Literal)
            throw ParseError("subject must be an IRI or blank node, got '" + tokens[0] + "'", lineno);
        triples.push_back(Triple{std::move(s), std::move(p), std::move(o)});
    }
    return RdfGraph(std::move(triples));
}

std::string serialize_graph(const RdfGraph& g) {
    std::vector<std::string> lines;
    lines.reserve(g.size());
    for (const auto& t : g.triples()) {
        lines.push_back(t.subject.to_string() + " " + t.predicate.to_string() + " " +
                        t.object.to_string() + " .");
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    return out;
}

}  // namespace tycus
