#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mhgf/canonical.hpp"
#include "mhgf/lifted.hpp"
#include "mhgf/multi_hypergraph.hpp"

namespace mhgf {

/// A pattern variable. An empty `label` matches any vertex label.
struct PatternVertex {
    std::string var;
    std::optional<Label> label;
    Count multiplicity = 1;
};

struct PatternEdge {
    Label label;
    std::vector<std::string> vars;  // multiset
    Count multiplicity = 1;
};

struct Pattern {
    std::vector<PatternVertex> vertices;
    std::vector<PatternEdge> edges;
};

/// Decrease the state edge matched by pattern edge `edge` by `amount`.
struct Retraction {
    std::size_t edge = 0;
    Count amount = 1;
};

/// Add `multiplicity` to the edge (label, vars) under the match.
struct Addition {
    Label label;
    std::vector<std::string> vars;
    Count multiplicity = 1;
};

struct Effect {
    std::vector<Retraction> retract;
    std::vector<Addition> add;
};

/// Bound arithmetic applying a rule whose `variable` is left unresolved.
///
/// Every vertex the variable could bind to contributes the edge produced by
/// the rule's single addition over that variable to the `target_group`
/// constraint. The group total moves by `total_delta`, each contributed
/// edge's upper bound by `per_edge_upper_delta`, and with `cap_to_total` no
/// upper bound in the group exceeds the new total. Retractions of edges over
/// the variable lower those edges' lower bounds.
struct LiftedEffect {
    std::string variable;
    std::string target_group;
    Count total_delta = 1;
    Count per_edge_upper_delta = 1;
    bool cap_to_total = true;

    friend bool operator==(const LiftedEffect&, const LiftedEffect&) = default;
};

/// Rewriting rule. `action` is the observable action class and defaults to
/// the rule name; several rules may share one action class.
class Rule {
public:
    /// Throws SemanticError when the pattern, effect or lifted effect is
    /// inconsistent.
    Rule(std::string name, Pattern lhs, Effect effect, std::optional<LiftedEffect> lifted_effect = std::nullopt,
         std::string action = {});

    const std::string& name() const noexcept { return name_; }
    const std::string& action() const noexcept { return action_; }
    const Pattern& lhs() const noexcept { return lhs_; }
    const Effect& effect() const noexcept { return effect_; }
    const std::optional<LiftedEffect>& lifted_effect() const noexcept { return lifted_effect_; }

    std::size_t var_index(std::string_view var) const;
    /// Pattern-edge vars resolved to variable indices.
    const std::vector<std::vector<std::size_t>>& edge_vars() const noexcept { return edge_vars_; }
    const std::vector<std::vector<std::size_t>>& addition_vars() const noexcept { return add_vars_; }

private:
    std::string name_;
    std::string action_;
    Pattern lhs_;
    Effect effect_;
    std::optional<LiftedEffect> lifted_effect_;
    std::map<std::string, std::size_t, std::less<>> var_index_;
    std::vector<std::vector<std::size_t>> edge_vars_;
    std::vector<std::vector<std::size_t>> add_vars_;
};

/// Injective embedding: assignment[i] is the state vertex bound to
/// lhs().vertices[i].
struct Match {
    std::vector<VertexIndex> assignment;

    friend bool operator==(const Match&, const Match&) = default;

    std::map<std::string, std::string> by_id(const Rule& rule, const VertexTable& table) const;
};

/// All embeddings, one per orbit under the automorphisms of `g`, ordered by
/// the vertex ids they bind.
std::vector<Match> find_matches(const Rule& rule, const MultiHypergraph& g);

/// Throws EffectError if the match does not embed or an edge would go
/// negative, IntegrityError (subject = rule name) if conservation breaks.
MultiHypergraph apply(const Rule& rule, const Match& m, const MultiHypergraph& g);

struct Successor {
    MultiHypergraph state;
    CanonicalForm form;
    double probability;
};

/// Distinct results of applying `rule`, weighted by the share of matches
/// producing each; sorted by canonical form. Empty iff inapplicable.
std::vector<Successor> successors(const Rule& rule, const MultiHypergraph& g);

enum class Applicability { never, always, mixed };
enum class LiftPath { rigid, lifted_effect, exact };

struct LiftedSuccessor {
    LiftedMultiHypergraph state;
    CanonicalForm form;
    double probability;
};

struct LiftedApplication {
    Applicability applicability = Applicability::never;
    LiftPath path = LiftPath::exact;
    std::vector<LiftedSuccessor> successors;
};

/// Apply `rule` to every grounding of `l` at once.
///
/// Three routes, tried in order:
///  - lifted effect: when the rule declares one and the rest of its pattern
///    binds to fixed edges only;
///  - rigid: every match uses fixed edges only and the effect leaves bounded
///    edges alone, so the bounded part is carried over unchanged;
///  - exact: enumerate groundings (up to `cap`), apply the grounded
///    transition to each and return ground successors.
/// Successor probabilities are relative to the whole of `l`; under `mixed`
/// applicability they sum to the applicable share of groundings.
LiftedApplication lifted_apply_detailed(const Rule& rule, const LiftedMultiHypergraph& l,
                                        std::uint64_t cap = kDefaultEnumerationCap);

std::vector<LiftedSuccessor> lifted_apply(const Rule& rule, const LiftedMultiHypergraph& l,
                                          std::uint64_t cap = kDefaultEnumerationCap);

/// Exact route only; the reference the other routes must agree with.
LiftedApplication lifted_apply_exact(const Rule& rule, const LiftedMultiHypergraph& l,
                                     std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace mhgf
