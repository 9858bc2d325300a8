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

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gta/core.hpp"
#include "gta/query.hpp"

namespace gta {

/// Node rule A(f_A(xs)) <- q(xs). Head variables are exactly the body's free
/// variables, and the body is acyclic.
struct NodeRule {
    std::string label;
    std::vector<std::string> head_vars;
    C2rpq body;
};

/// Edge rule r(f_A(xs), f_B(ys)) <- q(xs, ys); xs and ys are disjoint.
struct EdgeRule {
    std::string edge_label;
    std::string src_label;
    std::vector<std::string> src_vars;
    std::string tgt_label;
    std::vector<std::string> tgt_vars;
    C2rpq body;  // free vars = src_vars then tgt_vars
};

/// Finite set of rules with one constructor arity per node label (checked at
/// construction).
class Transformation {
public:
    Transformation() = default;
    Transformation(std::vector<NodeRule> node_rules, std::vector<EdgeRule> edge_rules);

    const std::vector<NodeRule>& node_rules() const { return node_rules_; }
    const std::vector<EdgeRule>& edge_rules() const { return edge_rules_; }

    /// Node labels used in rule heads (including edge-rule endpoints).
    const std::set<std::string>& gamma() const { return gamma_; }
    /// Edge labels used in rule heads.
    const std::set<std::string>& sigma() const { return sigma_; }
    std::size_t arity(const std::string& node_label) const;

private:
    void validate();
    std::vector<NodeRule> node_rules_;
    std::vector<EdgeRule> edge_rules_;
    std::set<std::string> gamma_, sigma_;
    std::map<std::string, std::size_t> arity_;
};

Graph apply(const Transformation& t, const Graph& g);

/// Union of node-rule bodies for label A, or a single all-empty disjunct of
/// the right arity when no rule exists.
Uc2rpq grouped_node_query(const Transformation& t, const std::string& a);

/// Union of edge-rule bodies for (A, R, B); for inverted R the argument
/// roles are swapped so the free-variable order is always the A-side tuple
/// followed by the B-side tuple.
Uc2rpq grouped_edge_query(const Transformation& t, const std::string& a,
                          const SignedEdgeLabel& r, const std::string& b);

/// Decides emptiness of a rule body modulo a schema; provided by the
/// containment module (kept as a std::function to break the dependency
/// cycle).
using BodySatisfiable = std::function<bool(const C2rpq& body, const Schema& s)>;

/// Removes rules whose bodies are unsatisfiable modulo s and recomputes the
/// head label sets.
Transformation trim(const Transformation& t, const Schema& s, const BodySatisfiable& satisfiable);

}  // namespace gta
