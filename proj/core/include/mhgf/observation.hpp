#pragma once

#include <map>
#include <string>
#include <vector>

#include "mhgf/lifted.hpp"
#include "mhgf/multi_hypergraph.hpp"

namespace mhgf {

using HeldMap = std::map<Label, Count>;

/// One annotation: the action class, the agent's location before and after,
/// and the held objects (label -> count) before and after.
struct AnnotationTuple {
    std::string action;
    Label loc_t;
    Label loc_next;
    HeldMap held_t;
    HeldMap held_next;

    friend bool operator==(const AnnotationTuple&, const AnnotationTuple&) = default;
};

/// "take floor->floor [] -> [eccentric:1]" style rendering for messages.
std::string describe(const AnnotationTuple& y);

/// Which parts of a state an annotation observes.
///
/// The agent is at exactly one vertex whose label is in `locations`, via a
/// `location_edge` edge over {agent, place}. Held objects are `held_edge`
/// edges over {agent, object}; the annotation gives, per object label, the
/// summed multiplicity.
struct ObservationModel {
    std::string agent;
    Label location_edge;
    Label held_edge;
    std::vector<Label> locations;

    friend bool operator==(const ObservationModel&, const ObservationModel&) = default;
};

/// A state restricted to the groundings agreeing with an observation, and
/// the share of the original groundings it covers.
struct Restriction {
    LiftedMultiHypergraph state;
    double share;
    bool unchanged = false;  // state is the input itself
};

/// Observation model resolved against one vertex universe.
class Observer {
public:
    /// Throws SemanticError when the agent or a location label is unknown.
    Observer(ObservationModel model, VertexTablePtr table);

    const ObservationModel& model() const noexcept { return model_; }
    const VertexTablePtr& table() const noexcept { return table_; }

    /// Throws InputError for an undeclared location or a negative count.
    void validate(const AnnotationTuple& y) const;

    bool consistent(const MultiHypergraph& g, Label loc, const HeldMap& held) const;

    /// Exact restriction of `l` to the groundings consistent with
    /// (loc, held). Bounds are tightened when every observed sum has at most
    /// one bounded summand; otherwise the consistent groundings are returned
    /// as ground singletons. Shares sum to the consistent fraction.
    std::vector<Restriction> restrict(const LiftedMultiHypergraph& l, Label loc, const HeldMap& held,
                                      std::uint64_t cap = kDefaultEnumerationCap) const;

    /// Observed values of a ground state.
    Label location_of(const MultiHypergraph& g) const;
    HeldMap held_by(const MultiHypergraph& g) const;

private:
    struct Requirement {
        const std::vector<EdgeKey>* keys;
        Count value;
    };
    std::vector<Requirement> requirements(Label loc, const HeldMap& held) const;

    ObservationModel model_;
    VertexTablePtr table_;
    VertexIndex agent_;
    std::map<Label, std::vector<EdgeKey>> loc_keys_;
    std::map<Label, std::vector<EdgeKey>> held_keys_;
    std::vector<EdgeKey> no_keys_;
};

}  // namespace mhgf
