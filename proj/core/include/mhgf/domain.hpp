#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mhgf/lifted.hpp"
#include "mhgf/observation.hpp"
#include "mhgf/rewrite.hpp"

namespace mhgf {

/// p(a_t | x_t): uniform over the rules applicable in x_t, or proportional to
/// per-rule weights (rules without an entry weigh 1).
struct ActionModel {
    enum class Kind { uniform, weighted };
    Kind kind = Kind::uniform;
    std::map<std::string, double> weights;

    /// Probabilities aligned with `applicable`; all zero when no applicable
    /// rule has positive weight.
    std::vector<double> distribution(const std::vector<const Rule*>& applicable) const;

    friend bool operator==(const ActionModel&, const ActionModel&) = default;
};

struct Domain {
    std::string name;
    std::set<Label> vertex_labels;
    std::set<Label> edge_labels;
    Conservation conservation;
    LiftedMultiHypergraph initial;
    std::vector<Rule> rules;
    ActionModel action_model;
    ObservationModel observation;

    const Rule* find_rule(std::string_view name) const;
    /// Action classes in first-appearance order.
    std::vector<std::string> actions() const;
};

}  // namespace mhgf
