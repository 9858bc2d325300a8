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
#include <set>
#include <string>
#include <vector>

#include "gta/core.hpp"
#include "gta/query.hpp"

namespace gta {

/// Intersection of concept names; the empty set denotes top.
using Conjunction = std::set<std::string>;

std::string conjunction_to_string(const Conjunction& k);

/// Horn-ALCIF concept inclusion in normal form, plus the guarded-disjunction
/// form used only by model checks.
struct ConceptInclusion {
    enum class Kind { Subsume, Bottom, ForAll, Exists, NoExists, AtMostOne, Disjunction };

    Kind kind = Kind::Bottom;
    Conjunction lhs;
    std::string subsumer;                 // Subsume
    SignedEdgeLabel role;                 // ForAll / Exists / NoExists / AtMostOne
    Conjunction rhs;                      // ForAll / Exists / NoExists / AtMostOne
    std::vector<std::string> disjuncts;   // Disjunction (nonempty)

    static ConceptInclusion subsume(Conjunction k, std::string a);
    static ConceptInclusion bottom(Conjunction k);
    static ConceptInclusion forall(Conjunction k, SignedEdgeLabel r, Conjunction k2);
    static ConceptInclusion exists(Conjunction k, SignedEdgeLabel r, Conjunction k2);
    static ConceptInclusion noexists(Conjunction k, SignedEdgeLabel r, Conjunction k2);
    static ConceptInclusion atmost1(Conjunction k, SignedEdgeLabel r, Conjunction k2);
    static ConceptInclusion disjunction(Conjunction k, std::vector<std::string> ds);

    std::string to_string() const;
    auto operator<=>(const ConceptInclusion&) const = default;
};

class TBox {
public:
    TBox() = default;
    explicit TBox(std::set<ConceptInclusion> cis) : cis_(std::move(cis)) {}

    const std::set<ConceptInclusion>& cis() const { return cis_; }
    void add(ConceptInclusion ci) { cis_.insert(std::move(ci)); }
    void merge(const TBox& o) { cis_.insert(o.cis().begin(), o.cis().end()); }
    bool contains(const ConceptInclusion& ci) const { return cis_.count(ci) > 0; }

    std::set<std::string> concept_names() const;
    std::set<std::string> role_names() const;
    std::size_t atmost_count() const;

    bool operator==(const TBox& o) const = default;

private:
    std::set<ConceptInclusion> cis_;
};

/// Participation constraints of a schema as an L0 TBox: Exists for 1/+,
/// AtMostOne for 1/?/0, NoExists for 0.
TBox tbox_of_schema(const Schema& s);

/// tbox_of_schema plus pairwise label disjointness A & B <= bot.
TBox hat_tbox(const Schema& s);

/// Inverse of tbox_of_schema over the given signature. NoExists without its
/// AtMostOne companion is auto-completed; a contradictory Exists/NoExists
/// pair raises IncoherentTBoxError.
Schema schema_of_tbox(const TBox& t, const std::set<std::string>& gamma,
                      const std::set<std::string>& sigma);

struct ModelCheckViolation {
    ConceptInclusion ci;
    NodeId node;
};

struct ModelCheckReport {
    bool ok = true;
    std::vector<ModelCheckViolation> violations;
};

/// Direct evaluation of every concept inclusion on the graph.
ModelCheckReport model_check(const Graph& g, const TBox& t);

/// Minimal valuation of the guessable concepts under the monotone rule
/// fragment (Subsume / ForAll), returned as an extended graph. Guessable
/// concepts may only occur in Subsume, ForAll, and Bottom inclusions; other
/// occurrences raise Error. A graph satisfies such a TBox under some
/// valuation iff the returned extension passes model_check.
Graph least_fixpoint_extension(const Graph& g, const TBox& t,
                               const std::set<std::string>& guessable);

/// Decides unrestricted satisfiability of a C2RPQ modulo a TBox; provided by
/// the sat module (function type breaks the dependency cycle).
using SatEngine = std::function<bool(const C2rpq& query, const TBox& t)>;

/// Unrestricted CI entailment via the reduction to query unsatisfiability
/// (fresh marker concepts B, B'); supports Exists and AtMostOne shapes.
bool entails_ci(const TBox& t, const ConceptInclusion& ci, const SatEngine& engine);

/// Is there a model of t containing an R-edge from a K-node to a K'-node?
bool triple_satisfiable(const TBox& t, const Conjunction& k, const SignedEdgeLabel& r,
                        const Conjunction& k2, const SatEngine& engine);

/// Simplification of an S-driven TBox to at most |Sigma±|*|Gamma|^2 at-most
/// constraints: conjunction-level at-mosts backed by a label-level one are
/// dropped, unbacked ones are replaced by NoExists.
TBox reduce_atmost(const TBox& t, const Schema& s);

struct CompletionCaps {
    int max_concepts = 16;
    std::size_t max_conjunctions = 16384;
    int chase_depth = 24;
    int chase_nodes = 2048;
    int max_rounds = 10000;
};

/// Cycle-reversing completion of an S-driven TBox: exhaustively finds finmod
/// cycles over the conjunction lattice (restricted to consistent
/// conjunctions with at most one schema label), reverses them, adds the
/// unique label-level reversed cycle when the cycle is satisfiable, and
/// re-reduces, until no unreversed cycle remains.
TBox complete(const TBox& t, const Schema& s, const SatEngine& engine,
              const CompletionCaps& caps = {});

/// Syntactic Horn entailment used by the completion's edge relation: decides
/// T |= K <= exists R.K' with a canonical-model chase. Exposed for tests.
bool chase_entails_exists(const TBox& t, const Conjunction& k, const SignedEdgeLabel& r,
                          const Conjunction& k2, const CompletionCaps& caps = {});

/// Structural S-drivenness check: every Exists/AtMostOne CI either is
/// label-level (single schema labels on both sides) or is backed by a
/// label-level CI of the same shape and role in t.
bool is_s_driven_structurally(const TBox& t, const Schema& s);

}  // namespace gta
