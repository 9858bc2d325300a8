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

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gta/core.hpp"

namespace gta {

/// Alphabet symbol of a two-way regular expression: a node label test or a
/// signed edge step.
struct Symbol {
    bool is_node_test = false;
    std::string label;
    bool inverted = false;  // only for edge steps

    SignedEdgeLabel edge() const { return {label, inverted}; }
    Symbol inverse() const { return is_node_test ? *this : Symbol{false, label, !inverted}; }
    std::string to_string() const {
        return is_node_test ? label : SignedEdgeLabel{label, inverted}.to_string();
    }
    auto operator<=>(const Symbol&) const = default;
};

/// Two-way regular path expression AST.
class PathExpr {
public:
    enum class Kind { Empty, Epsilon, NodeTest, Step, Concat, Union, Star };
    using Ptr = std::shared_ptr<const PathExpr>;

    static Ptr empty();
    static Ptr epsilon();
    static Ptr node_test(std::string label);
    static Ptr step(SignedEdgeLabel r);
    static Ptr concat(Ptr a, Ptr b);
    static Ptr alt(Ptr a, Ptr b);
    static Ptr star(Ptr a);

    Kind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    bool inverted() const { return inverted_; }
    const Ptr& left() const { return left_; }
    const Ptr& right() const { return right_; }

    std::string to_string() const;
    std::set<std::string> node_labels() const;
    std::set<std::string> edge_labels() const;
    int size() const;

    /// Direct AST word matcher (test oracle; independent of the NFA path).
    bool matches(const std::vector<Symbol>& word) const;

private:
    Kind kind_ = Kind::Empty;
    std::string label_;
    bool inverted_ = false;
    Ptr left_, right_;
};

/// epsilon-free NFA over node-test and edge-step symbols.
struct Nfa {
    struct Transition {
        int from;
        Symbol sym;
        int to;
        auto operator<=>(const Transition&) const = default;
    };
    int state_count = 0;
    std::set<int> initial;
    std::set<int> final;
    std::vector<Transition> transitions;

    bool accepts(const std::vector<Symbol>& word) const;
};

/// Glushkov construction followed by a forward-bisimulation quotient;
/// state count stays linear in the expression size.
Nfa compile_nfa(const PathExpr::Ptr& e);

/// Swaps initial/final, reverses transitions, and inverts edge-step symbols;
/// recognizes exactly the letter-wise-inverted reversals.
Nfa reverse_nfa(const Nfa& n);

/// An atom phi(x, y) of a C2RPQ.
struct Atom {
    PathExpr::Ptr expr;
    std::string src;
    std::string tgt;

    /// Trivial atoms have identical endpoints and expression empty, eps, or a
    /// single node test; they do not contribute multigraph edges.
    bool trivial() const;
};

/// Conjunctive two-way regular path query.
struct C2rpq {
    std::vector<std::string> free_vars;  // ordered
    std::set<std::string> exist_vars;
    std::vector<Atom> atoms;

    std::set<std::string> all_vars() const;
    bool is_boolean() const { return free_vars.empty(); }
    std::set<std::string> node_labels() const;
    std::set<std::string> edge_labels() const;
};

/// Union of C2RPQs with identical free-variable arity.
struct Uc2rpq {
    std::vector<C2rpq> disjuncts;  // nonempty

    std::size_t arity() const { return disjuncts.empty() ? 0 : disjuncts[0].free_vars.size(); }
    std::set<std::string> node_labels() const;
    std::set<std::string> edge_labels() const;
};

/// Answer tuples over the free variables (the empty tuple for Boolean
/// queries).
using AnswerSet = std::set<std::vector<NodeId>>;

/// (u, v) pairs connected by a path whose labeling lies in L(e); node tests
/// hold in place, edge steps follow the signed direction.
std::set<std::pair<NodeId, NodeId>> eval_atom(const PathExpr::Ptr& e, const Graph& g);

AnswerSet eval_query(const C2rpq& q, const Graph& g);
AnswerSet eval_query(const Uc2rpq& q, const Graph& g);

inline bool satisfied(const C2rpq& q, const Graph& g) { return !eval_query(q, g).empty(); }
inline bool satisfied(const Uc2rpq& q, const Graph& g) { return !eval_query(q, g).empty(); }

/// Multigraph acyclicity: the undirected multigraph of non-trivial atoms is
/// a forest (parallel atoms and non-trivial self-atoms count as cycles).
bool is_acyclic(const C2rpq& q);
bool is_acyclic(const Uc2rpq& q);
bool is_connected(const C2rpq& q);

/// Partition into connected components; isolated variables become
/// single-variable components with an eps self-atom.
std::vector<C2rpq> connected_components(const C2rpq& q);

}  // namespace gta
