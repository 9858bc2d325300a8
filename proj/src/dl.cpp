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
#include "gta/dl.hpp"

#include <algorithm>
#include <sstream>

namespace gta {

std::string conjunction_to_string(const Conjunction& k) {
    if (k.empty()) return "top";
    std::ostringstream os;
    bool first = true;
    for (const auto& a : k) {
        if (!first) os << " & ";
        os << a;
        first = false;
    }
    return os.str();
}

ConceptInclusion ConceptInclusion::subsume(Conjunction k, std::string a) {
    ConceptInclusion ci;
    ci.kind = Kind::Subsume;
    ci.lhs = std::move(k);
    ci.subsumer = std::move(a);
    return ci;
}
ConceptInclusion ConceptInclusion::bottom(Conjunction k) {
    ConceptInclusion ci;
    ci.kind = Kind::Bottom;
    ci.lhs = std::move(k);
    return ci;
}
ConceptInclusion ConceptInclusion::forall(Conjunction k, SignedEdgeLabel r, Conjunction k2) {
    ConceptInclusion ci;
    ci.kind = Kind::ForAll;
    ci.lhs = std::move(k);
    ci.role = std::move(r);
    ci.rhs = std::move(k2);
    return ci;
}
ConceptInclusion ConceptInclusion::exists(Conjunction k, SignedEdgeLabel r, Conjunction k2) {
    ConceptInclusion ci;
    ci.kind = Kind::Exists;
    ci.lhs = std::move(k);
    ci.role = std::move(r);
    ci.rhs = std::move(k2);
    return ci;
}
ConceptInclusion ConceptInclusion::noexists(Conjunction k, SignedEdgeLabel r, Conjunction k2) {
    ConceptInclusion ci;
    ci.kind = Kind::NoExists;
    ci.lhs = std::move(k);
    ci.role = std::move(r);
    ci.rhs = std::move(k2);
    return ci;
}
ConceptInclusion ConceptInclusion::atmost1(Conjunction k, SignedEdgeLabel r, Conjunction k2) {
    ConceptInclusion ci;
    ci.kind = Kind::AtMostOne;
    ci.lhs = std::move(k);
    ci.role = std::move(r);
    ci.rhs = std::move(k2);
    return ci;
}
ConceptInclusion ConceptInclusion::disjunction(Conjunction k, std::vector<std::string> ds) {
    ConceptInclusion ci;
    ci.kind = Kind::Disjunction;
    ci.lhs = std::move(k);
    ci.disjuncts = std::move(ds);
    return ci;
}

std::string ConceptInclusion::to_string() const {
    std::ostringstream os;
    os << conjunction_to_string(lhs) << " <= ";
    auto role_str = [&] { return role.inverted ? "inv(" + role.label + ")" : role.label; };
    switch (kind) {
        case Kind::Subsume: os << subsumer; break;
        case Kind::Bottom: os << "bot"; break;
        case Kind::ForAll: os << "all " << role_str() << " . " << conjunction_to_string(rhs); break;
        case Kind::Exists:
            os << "exists " << role_str() << " . " << conjunction_to_string(rhs);
            break;
        case Kind::NoExists:
            os << "noexists " << role_str() << " . " << conjunction_to_string(rhs);
            break;
        case Kind::AtMostOne:
            os << "atmost1 " << role_str() << " . " << conjunction_to_string(rhs);
            break;
        case Kind::Disjunction: {
            bool first = true;
            for (const auto& d : disjuncts) {
                if (!first) os << " | ";
                os << d;
                first = false;
            }
            break;
        }
    }
    return os.str();
}

std::set<std::string> TBox::concept_names() const {
    std::set<std::string> out;
    for (const auto& ci : cis_) {
        out.insert(ci.lhs.begin(), ci.lhs.end());
        out.insert(ci.rhs.begin(), ci.rhs.end());
        if (ci.kind == ConceptInclusion::Kind::Subsume) out.insert(ci.subsumer);
        out.insert(ci.disjuncts.begin(), ci.disjuncts.end());
    }
    return out;
}

std::set<std::string> TBox::role_names() const {
    std::set<std::string> out;
    for (const auto& ci : cis_)
        if (ci.kind == ConceptInclusion::Kind::ForAll || ci.kind == ConceptInclusion::Kind::Exists ||
            ci.kind == ConceptInclusion::Kind::NoExists ||
            ci.kind == ConceptInclusion::Kind::AtMostOne)
            out.insert(ci.role.label);
    return out;
}

std::size_t TBox::atmost_count() const {
    std::size_t n = 0;
    for (const auto& ci : cis_)
        if (ci.kind == ConceptInclusion::Kind::AtMostOne) ++n;
    return n;
}

TBox tbox_of_schema(const Schema& s) {
    TBox t;
    for (const auto& a : s.node_labels())
        for (const auto& r : s.signed_edge_labels())
            for (const auto& b : s.node_labels()) {
                Multiplicity m = s.delta(a, r, b);
                if (m == Multiplicity::One || m == Multiplicity::Plus)
                    t.add(ConceptInclusion::exists({a}, r, {b}));
                if (m == Multiplicity::One || m == Multiplicity::Opt || m == Multiplicity::None)
                    t.add(ConceptInclusion::atmost1({a}, r, {b}));
                if (m == Multiplicity::None) t.add(ConceptInclusion::noexists({a}, r, {b}));
            }
    return t;
}

TBox hat_tbox(const Schema& s) {
    TBox t = tbox_of_schema(s);
    for (const auto& a : s.node_labels())
        for (const auto& b : s.node_labels())
            if (a < b) t.add(ConceptInclusion::bottom({a, b}));
    return t;
}

Schema schema_of_tbox(const TBox& t, const std::set<std::string>& gamma,
                      const std::set<std::string>& sigma) {
    Schema s(gamma, sigma);
    struct Flags {
        bool ex = false, am = false, no = false;
    };
    std::map<std::tuple<std::string, SignedEdgeLabel, std::string>, Flags> flags;
    for (const auto& ci : t.cis()) {
        if (ci.kind == ConceptInclusion::Kind::Subsume || ci.kind == ConceptInclusion::Kind::Bottom ||
            ci.kind == ConceptInclusion::Kind::ForAll ||
            ci.kind == ConceptInclusion::Kind::Disjunction)
            throw IncoherentTBoxError("not an L0 statement: " + ci.to_string());
        if (ci.lhs.size() != 1 || ci.rhs.size() != 1)
            throw IncoherentTBoxError("L0 statements use single labels: " + ci.to_string());
        const std::string& a = *ci.lhs.begin();
        const std::string& b = *ci.rhs.begin();
        if (!gamma.count(a) || !gamma.count(b) || !sigma.count(ci.role.label))
            throw IncoherentTBoxError("statement outside the signature: " + ci.to_string());
        Flags& f = flags[{a, ci.role, b}];
        if (ci.kind == ConceptInclusion::Kind::Exists) f.ex = true;
        if (ci.kind == ConceptInclusion::Kind::AtMostOne) f.am = true;
        if (ci.kind == ConceptInclusion::Kind::NoExists) f.no = true;
    }
    for (const auto& a : gamma) {
        for (const auto& rl : s.signed_edge_labels()) {
            for (const auto& b : gamma) {
                Flags f;
                auto it = flags.find({a, rl, b});
                if (it != flags.end()) f = it->second;
                if (f.ex && f.no)
                    throw IncoherentTBoxError("contradictory statements for (" + a + ", " +
                                              rl.to_string() + ", " + b + ")");
                Multiplicity m;
                if (f.no)
                    m = Multiplicity::None;  // NoExists implies AtMostOne; auto-completed
                else if (f.ex && f.am)
                    m = Multiplicity::One;
                else if (f.ex)
                    m = Multiplicity::Plus;
                else if (f.am)
                    m = Multiplicity::Opt;
                else
                    m = Multiplicity::Any;  // unconstrained triple
                s.set_delta(a, rl, b, m);
            }
        }
    }
    return s;
}

namespace {
bool holds_at(const Graph& g, const Conjunction& k, const NodeId& u) {
    for (const auto& a : k)
        if (!g.has_label(u, a)) return false;
    return true;
}

std::size_t count_successors(const Graph& g, const NodeId& u, const SignedEdgeLabel& r,
                             const Conjunction& k) {
    std::size_t n = 0;
    for (const auto& v : g.successors(u, r))
        if (holds_at(g, k, v)) ++n;
    return n;
}
}  // namespace

ModelCheckReport model_check(const Graph& g, const TBox& t) {
    ModelCheckReport rep;
    for (const auto& ci : t.cis()) {
        for (const auto& u : g.nodes()) {
            if (!holds_at(g, ci.lhs, u)) continue;
            bool ok = true;
            switch (ci.kind) {
                case ConceptInclusion::Kind::Subsume: ok = g.has_label(u, ci.subsumer); break;
                case ConceptInclusion::Kind::Bottom: ok = false; break;
                case ConceptInclusion::Kind::ForAll: {
                    for (const auto& v : g.successors(u, ci.role))
                        if (!holds_at(g, ci.rhs, v)) {
                            ok = false;
                            break;
                        }
                    break;
                }
                case ConceptInclusion::Kind::Exists:
                    ok = count_successors(g, u, ci.role, ci.rhs) >= 1;
                    break;
                case ConceptInclusion::Kind::NoExists:
                    ok = count_successors(g, u, ci.role, ci.rhs) == 0;
                    break;
                case ConceptInclusion::Kind::AtMostOne:
                    ok = count_successors(g, u, ci.role, ci.rhs) <= 1;
                    break;
                case ConceptInclusion::Kind::Disjunction: {
                    ok = false;
                    for (const auto& d : ci.disjuncts)
                        if (g.has_label(u, d)) {
                            ok = true;
                            break;
                        }
                    break;
                }
            }
            if (!ok) {
                rep.ok = false;
                rep.violations.push_back({ci, u});
            }
        }
    }
    return rep;
}

Graph least_fixpoint_extension(const Graph& g, const TBox& t,
                               const std::set<std::string>& guessable) {
    for (const auto& ci : t.cis()) {
        bool touches = false;
        for (const auto& a : guessable)
            if (ci.lhs.count(a) || ci.rhs.count(a) || ci.subsumer == a ||
                std::find(ci.disjuncts.begin(), ci.disjuncts.end(), a) != ci.disjuncts.end())
                touches = true;
        if (!touches) continue;
        if (ci.kind != ConceptInclusion::Kind::Subsume && ci.kind != ConceptInclusion::Kind::ForAll &&
            ci.kind != ConceptInclusion::Kind::Bottom)
            throw Error("guessable concept in a non-monotone inclusion: " + ci.to_string());
    }

    Graph ext = g;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& ci : t.cis()) {
            if (ci.kind == ConceptInclusion::Kind::Subsume) {
                if (!guessable.count(ci.subsumer)) continue;
                for (const auto& u : ext.nodes())
                    if (holds_at(ext, ci.lhs, u) && !ext.has_label(u, ci.subsumer)) {
                        ext.add_label(u, ci.subsumer);
                        changed = true;
                    }
            } else if (ci.kind == ConceptInclusion::Kind::ForAll) {
                for (const auto& u : ext.nodes()) {
                    if (!holds_at(ext, ci.lhs, u)) continue;
                    for (const auto& v : ext.successors(u, ci.role))
                        for (const auto& b : ci.rhs)
                            if (guessable.count(b) && !ext.has_label(v, b)) {
                                ext.add_label(v, b);
                                changed = true;
                            }
                }
            }
        }
    }
    return ext;
}

namespace {
std::string fresh_concept(const TBox& t, const std::string& base) {
    auto names = t.concept_names();
    std::string cand = base;
    int k = 0;
    while (names.count(cand)) cand = base + std::to_string(k++);
    return cand;
}

PathExpr::Ptr node_test_chain(const Conjunction& k) {
    PathExpr::Ptr e;
    for (const auto& a : k) {
        auto test = PathExpr::node_test(a);
        e = e ? PathExpr::concat(e, test) : test;
    }
    return e ? e : PathExpr::epsilon();
}
}  // namespace

bool entails_ci(const TBox& t, const ConceptInclusion& ci, const SatEngine& engine) {
    std::string b = fresh_concept(t, std::string(kReservedPrefix) + "entB");
    std::string bp = b + "p";

    if (ci.kind == ConceptInclusion::Kind::Exists) {
        // T |= K <= exists R.K'  iff  exists x.(A1...An.B)(x,x) is
        // unsatisfiable modulo T + { K' <= all R-.B', B & B' <= bot }.
        TBox ext = t;
        ext.add(ConceptInclusion::forall(ci.rhs, ci.role.inverse(), {bp}));
        ext.add(ConceptInclusion::bottom({b, bp}));
        C2rpq q;
        q.exist_vars.insert("x");
        q.atoms.push_back({PathExpr::concat(node_test_chain(ci.lhs), PathExpr::node_test(b)), "x", "x"});
        return !engine(q, ext);
    }
    if (ci.kind == ConceptInclusion::Kind::AtMostOne) {
        // T |= K <= atmost1 R.K'  iff  the two-witness query is
        // unsatisfiable modulo T + { B & B' <= bot }.
        TBox ext = t;
        ext.add(ConceptInclusion::bottom({b, bp}));
        C2rpq q;
        q.exist_vars = {"x", "y", "z"};
        q.atoms.push_back({node_test_chain(ci.lhs), "x", "x"});
        auto branch = [&](const std::string& marker) {
            return PathExpr::concat(PathExpr::step(ci.role),
                                    PathExpr::concat(node_test_chain(ci.rhs),
                                                     PathExpr::node_test(marker)));
        };
        q.atoms.push_back({branch(b), "x", "y"});
        q.atoms.push_back({branch(bp), "x", "z"});
        return !engine(q, ext);
    }
    throw Error("entails_ci supports Exists and AtMostOne shapes only");
}

bool triple_satisfiable(const TBox& t, const Conjunction& k, const SignedEdgeLabel& r,
                        const Conjunction& k2, const SatEngine& engine) {
    C2rpq q;
    q.exist_vars = {"x", "y"};
    for (const auto& a : k) q.atoms.push_back({PathExpr::node_test(a), "x", "x"});
    q.atoms.push_back({PathExpr::step(r), "x", "y"});
    for (const auto& a : k2) q.atoms.push_back({PathExpr::node_test(a), "y", "y"});
    return engine(q, t);
}

TBox reduce_atmost(const TBox& t, const Schema& s) {
    auto is_label_level = [&](const ConceptInclusion& ci) {
        return ci.lhs.size() == 1 && ci.rhs.size() == 1 && s.node_labels().count(*ci.lhs.begin()) &&
               s.node_labels().count(*ci.rhs.begin());
    };
    TBox out;
    for (const auto& ci : t.cis()) {
        if (ci.kind != ConceptInclusion::Kind::AtMostOne || is_label_level(ci)) {
            out.add(ci);
            continue;
        }
        bool backed = false;
        for (const auto& other : t.cis()) {
            if (other.kind != ConceptInclusion::Kind::AtMostOne || !is_label_level(other)) continue;
            if (other.role != ci.role) continue;
            if (ci.lhs.count(*other.lhs.begin()) && ci.rhs.count(*other.rhs.begin())) {
                backed = true;
                break;
            }
        }
        if (backed)
            continue;  // entailed by the label-level constraint
        out.add(ConceptInclusion::noexists(ci.lhs, ci.role, ci.rhs));
    }
    return out;
}

bool is_s_driven_structurally(const TBox& t, const Schema& s) {
    auto label_level = [&](const ConceptInclusion& ci) {
        return ci.lhs.size() == 1 && ci.rhs.size() == 1 && s.node_labels().count(*ci.lhs.begin()) &&
               s.node_labels().count(*ci.rhs.begin());
    };
    for (const auto& ci : t.cis()) {
        if (ci.kind != ConceptInclusion::Kind::Exists && ci.kind != ConceptInclusion::Kind::AtMostOne)
            continue;
        if (label_level(ci)) continue;
        bool backed = false;
        for (const auto& other : t.cis()) {
            if (other.kind != ci.kind || !label_level(other) || other.role != ci.role) continue;
            if (ci.lhs.count(*other.lhs.begin()) && ci.rhs.count(*other.rhs.begin())) {
                backed = true;
                break;
            }
        }
        if (!backed) return false;
    }
    return true;
}

}  // namespace gta
