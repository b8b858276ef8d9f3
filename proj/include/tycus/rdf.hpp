#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace tycus {

/// Error thrown by the text-format parsers. `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

enum class NodeKind { Iri, Literal, Blank };

/// A graph node: IRI, literal or blank node. Equality is kind + payload.
struct Node {
    NodeKind kind = NodeKind::Iri;
    std::string text;

    static Node iri(std::string name) { return Node{NodeKind::Iri, std::move(name)}; }
    static Node literal(std::string lexical) { return Node{NodeKind::Literal, std::move(lexical)}; }
    static Node blank(std::string id) { return Node{NodeKind::Blank, std::move(id)}; }

    bool operator==(const Node& o) const { return kind == o.kind && text == o.text; }
    bool operator!=(const Node& o) const { return !(*this == o); }
    bool operator<(const Node& o) const {
        if (kind != o.kind) return kind < o.kind;
        return text < o.text;
    }

    /// Token form used by the .nt serializer and everywhere nodes are printed.
    std::string to_string() const;
};

struct Triple {
    Node subject;
    Node predicate;
    Node object;

    bool operator==(const Triple& o) const {
        return subject == o.subject && predicate == o.predicate && object == o.object;
    }
    bool operator<(const Triple& o) const {
        if (!(subject == o.subject)) return subject < o.subject;
        if (!(predicate == o.predicate)) return predicate < o.predicate;
        return object < o.object;
    }
};

/// Immutable set of triples plus a predicate index for path evaluation.
class RdfGraph {
public:
    RdfGraph() = default;
    explicit RdfGraph(std::vector<Triple> triples);

    const std::set<Triple>& triples() const { return triples_; }
    std::size_t size() const { return triples_.size(); }
    bool empty() const { return triples_.empty(); }
    bool contains(const Triple& t) const { return triples_.count(t) > 0; }

    /// Subjects and objects of all triples (the paper's node set); predicates
    /// are excluded unless they also occur in subject or object position.
    const std::set<Node>& nodes() const { return nodes_; }

    /// (subject, object) pairs for a given predicate IRI; empty for unknown ones.
    const std::vector<std::pair<Node, Node>>& edges(const Node& predicate) const;

    bool operator==(const RdfGraph& o) const { return triples_ == o.triples_; }

private:
    std::set<Triple> triples_;
    std::set<Node> nodes_;
    std::map<Node, std::vector<std::pair<Node, Node>>> by_predicate_;
};

/// Parses the simplified line-oriented triple format: `subject predicate object .`
/// per line, `#` starting a comment line. Duplicate lines collapse.
RdfGraph parse_graph(const std::string& text);

/// Deterministic (lexicographically sorted) line output; inverse of parse_graph.
std::string serialize_graph(const RdfGraph& g);

}  // namespace tycus
