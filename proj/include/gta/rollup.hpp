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

#include "gta/dl.hpp"
#include "gta/query.hpp"

namespace gta {

/// Rooted view of a Boolean acyclic connected C2RPQ. Tree nodes are atoms;
/// each carries the variable at its child end and the atoms hanging below
/// that variable. The reversed flag records whether the atom's direction
/// disagrees with the child-to-parent reading the rolling-up rules assume.
struct QueryTree {
    struct AtomNode {
        PathExpr::Ptr expr;
        bool reversed = false;
        std::string child_var;
        std::vector<int> children;  // indices into nodes
    };
    std::string root_var;
    std::vector<int> root_atoms;  // atoms incident to the root variable
    std::vector<AtomNode> nodes;  // one entry per atom of the query
};

/// Roots the query at the leaf variable minimizing (reversal count, name);
/// raises Error when the query is not Boolean, acyclic, and connected.
QueryTree tree_decompose(const C2rpq& q);

struct RollupResult {
    TBox tbox;
    std::set<std::string> gamma_q;  // reserved state concepts
};

/// Compiles the negation of a Boolean acyclic UC2RPQ into a Horn TBox over
/// fresh state concepts: for every graph not using gamma_q, the query fails
/// iff some valuation of gamma_q satisfies the TBox. Disjuncts must be
/// connected (callers split unions into component choices first).
RollupResult rollup(const Uc2rpq& q);

/// Does g satisfy the rolled-up TBox under some valuation of gamma_q?
/// Computed via the least-fixpoint valuation (the denial inclusions hold for
/// the minimal valuation iff they hold for any).
bool rollup_holds(const Graph& g, const RollupResult& r);

}  // namespace gta
