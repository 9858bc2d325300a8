/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/
#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "gta/common.hpp"

namespace gta {

/// Node identifier: either an atomic name or a constructor term
/// Label(arg1, ..., argk). Constructed ids compare structurally, so
/// injectivity and pairwise-disjoint constructor ranges hold by
/// construction.
class NodeId {
public:
    NodeId() = default;
    static NodeId atomic(std::string name);
    static NodeId constructed(std::string label, std::vector<NodeId> args);

    bool is_constructed() const { return constructed_; }
    const std::string& name() const { return name_; }  // atom name or constructor label
    const std::vector<NodeId>& args() const { return args_; }

    std::string to_string() const;

    std::strong_ordering operator<=>(const NodeId& o) const;
    bool operator==(const NodeId& o) const { return (*this <=> o) == 0; }

private:
    bool constructed_ = false;
    std::string name_;
    std::vector<NodeId> args_;
};

/// Edge label with optional inversion: r or r^-.
struct SignedEdgeLabel {
    std::string label;
    bool inverted = false;

    SignedEdgeLabel inverse() const { return {label, !inverted}; }
    std::string to_string() const { return inverted ? "~" + label : label; }

    auto operator<=>(const SignedEdgeLabel&) const = default;
};

/// Participation constraint symbols with their count-set semantics.
enum class Multiplicity { Opt, One, Plus, Any, None };  // ? 1 + * 0

bool multiplicity_allows(Multiplicity m, std::size_t count);
/// Semantic count-set inclusion: m1 <= m2 iff every count allowed by m1 is
/// allowed by m2.
bool multiplicity_leq(Multiplicity m1, Multiplicity m2);
char multiplicity_token(Multiplicity m);
Multiplicity multiplicity_from_token(char c);

/// Finite labeled directed multigraph. Nodes may carry any number of labels
/// (conforming graphs have exactly one); edges are a set of
/// (src, label, tgt) triples, so parallel edges must differ in label.
class Graph {
public:
    using Edge = std::tuple<NodeId, std::string, NodeId>;

    void add_node(const NodeId& id);
    void add_label(const NodeId& id, const std::string& label);
    void add_edge(const NodeId& src, const std::string& label, const NodeId& tgt);

    const std::set<NodeId>& nodes() const { return nodes_; }
    const std::set<Edge>& edges() const { return edges_; }
    const std::set<std::string>& labels_of(const NodeId& id) const;
    bool has_label(const NodeId& id, const std::string& label) const;

    /// Distinct R-successors of u (follows edge direction, or the inverse
    /// when R is inverted).
    std::set<NodeId> successors(const NodeId& u, const SignedEdgeLabel& r) const;

    std::set<std::string> node_label_universe() const;
    std::set<std::string> edge_label_universe() const;

    bool operator==(const Graph& o) const {
        return nodes_ == o.nodes_ && node_labels_ == o.node_labels_ && edges_ == o.edges_;
    }

private:
    std::set<NodeId> nodes_;
    std::map<NodeId, std::set<std::string>> node_labels_;
    std::set<Edge> edges_;
};

/// Schema with participation constraints. delta is stored sparsely; any
/// unstored triple is None(0), matching the convention that absent edges
/// are implicitly forbidden.
class Schema {
public:
    Schema() = default;
    Schema(std::set<std::string> node_labels, std::set<std::string> edge_labels)
        : node_labels_(std::move(node_labels)), edge_labels_(std::move(edge_labels)) {}

    const std::set<std::string>& node_labels() const { return node_labels_; }
    const std::set<std::string>& edge_labels() const { return edge_labels_; }

    void add_node_label(const std::string& a) { node_labels_.insert(a); }
    void add_edge_label(const std::string& r) { edge_labels_.insert(r); }

    void set_delta(const std::string& a, const SignedEdgeLabel& r, const std::string& b,
                   Multiplicity m);
    Multiplicity delta(const std::string& a, const SignedEdgeLabel& r,
                       const std::string& b) const;

    /// All signed edge labels of the schema (each label both ways).
    std::vector<SignedEdgeLabel> signed_edge_labels() const;

    bool operator==(const Schema& o) const;

private:
    std::set<std::string> node_labels_;
    std::set<std::string> edge_labels_;
    std::map<std::tuple<std::string, SignedEdgeLabel, std::string>, Multiplicity> delta_;
};

struct ConformanceViolation {
    NodeId node;
    std::string constraint;  // human-readable description

    auto operator<=>(const ConformanceViolation&) const = default;
};

struct ConformanceReport {
    bool ok = true;
    std::vector<ConformanceViolation> violations;  // sorted by node, then constraint
};

/// Exhaustive conformance check: exactly one node label within the schema,
/// edge labels within the schema, and every participation count within its
/// constraint's count set.
ConformanceReport conforms(const Graph& g, const Schema& s);

/// L(s1) <= L(s2) over the padded common signature, decided pointwise with
/// the semantic count-set inclusion order.
bool schema_contains(const Schema& s1, const Schema& s2);

inline bool schema_equiv(const Schema& s1, const Schema& s2) {
    return schema_contains(s1, s2) && schema_contains(s2, s1);
}

/// Disjoint union; atomic ids of g2 colliding with g1 get a deterministic
/// suffix (recursively inside constructor terms).
Graph disjoint_union(const Graph& g1, const Graph& g2);

}  // namespace gta
