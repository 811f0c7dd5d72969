#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mhgf/domain.hpp"

namespace mhgf {

/// Normalized weighted set of lifted states keyed by canonical form.
class Belief {
public:
    struct Entry {
        LiftedMultiHypergraph state;
        double weight;
    };

    Belief() = default;
    /// Unit-weight belief; throws StructuralError for an empty-support state.
    explicit Belief(const LiftedMultiHypergraph& state);

    /// Add mass, merging with an existing entry of equal form. Non-positive
    /// weights and empty-support states are ignored.
    void add(LiftedMultiHypergraph state, double weight);
    void add(const CanonicalForm& form, LiftedMultiHypergraph state, double weight);

    /// Divide every weight by the total; returns the total.
    double normalize();

    double total() const;
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::map<CanonicalForm, Entry>& entries() const noexcept { return entries_; }

    /// Sum of count_groundings over entries.
    std::uint64_t ground_count() const;

private:
    std::map<CanonicalForm, Entry> entries_;
};

/// One (x_t, a_t, x_{t+1}) hypothesis.
struct Particle {
    CanonicalForm predecessor;
    std::shared_ptr<const LiftedMultiHypergraph> predecessor_state;
    const Rule* rule;
    LiftedMultiHypergraph successor;
    CanonicalForm successor_form;
    double weight;
};

struct JointPrediction {
    std::vector<Particle> particles;  // weights sum to 1 unless empty
    double dead_end_mass = 0.0;       // belief mass with no applicable rule
};

struct FilterOptions {
    std::uint64_t cap = kDefaultEnumerationCap;
};

/// Prediction: every (entry, applicable rule, successor) with weight
/// w * p(a | x_t) * q. Entries on which some rule is applicable to only part
/// of the groundings are first split into ground states. Dead-end mass is
/// dropped with a warning and the rest renormalized.
JointPrediction predict(const Belief& b, const std::vector<Rule>& rules, const ActionModel& am,
                        const FilterOptions& opts = {});

/// True iff the rule's action class matches and some grounding of each of
/// x_t and x_next agrees with the annotation.
bool consistent(const Observer& obs, const AnnotationTuple& y, const LiftedMultiHypergraph& x_t, const Rule& a,
                const LiftedMultiHypergraph& x_next, std::uint64_t cap = kDefaultEnumerationCap);

/// Conditioning on an annotation. Predecessors must be wholly consistent or wholly inconsistent with
/// (loc_t, held_t); filter_trace arranges this by restricting the belief
/// first. Throws TraceInconsistency(step) when nothing survives; `z` receives
/// the normalizer.
Belief update(const JointPrediction& j, const AnnotationTuple& y, const Observer& obs, std::size_t step,
              double* z = nullptr, const FilterOptions& opts = {});

struct StepStats {
    std::size_t step = 0;  // 0 is the initial belief
    std::string action;
    std::size_t lifted_count = 0;
    std::uint64_t ground_count = 0;
    double log_z = 0.0;
    std::string mode = "lifted";
};

nlohmann::json to_json(const StepStats& s);

/// Step-by-step lifted filter over one domain.
class LiftedFilter {
public:
    explicit LiftedFilter(const Domain& domain, FilterOptions opts = {});

    const Belief& belief() const noexcept { return belief_; }
    std::size_t steps_done() const noexcept { return step_; }
    StepStats initial_stats() const;

    /// Advance by one annotation. Throws TraceInconsistency carrying the
    /// 1-based index of this step; the filter is unchanged on error.
    StepStats step(const AnnotationTuple& y);

private:
    const Domain& domain_;
    FilterOptions opts_;
    Observer observer_;
    Belief belief_;
    std::size_t step_ = 0;
};

struct FilterResult {
    std::vector<Belief> beliefs;   // beliefs[0] is the initial belief
    std::vector<StepStats> stats;  // stats[0] describes it
};

FilterResult filter_trace(const Domain& domain, const std::vector<AnnotationTuple>& trace,
                          const FilterOptions& opts = {});

}  // namespace mhgf
