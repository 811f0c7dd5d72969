#pragma once

#include <map>
#include <vector>

#include "mhgf/filter.hpp"

namespace mhgf {

/// Normalized weighted set of ground states keyed by canonical form.
class GroundBelief {
public:
    struct Entry {
        MultiHypergraph state;
        double weight;
    };

    void add(const CanonicalForm& form, const MultiHypergraph& state, double weight);
    double normalize();
    double total() const;
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::map<CanonicalForm, Entry>& entries() const noexcept { return entries_; }

private:
    std::map<CanonicalForm, Entry> entries_;
};

/// Each (l, w) puts w / count_groundings(l) on every grounding of l.
GroundBelief expand(const Belief& b, std::uint64_t cap = kDefaultEnumerationCap);

/// Fully grounded counterpart of LiftedFilter: same steps, same error
/// contract, ground states only and no lifted effects.
class GroundFilter {
public:
    explicit GroundFilter(const Domain& domain, FilterOptions opts = {});

    const GroundBelief& belief() const noexcept { return belief_; }
    StepStats initial_stats() const;
    StepStats step(const AnnotationTuple& y);

private:
    const Domain& domain_;
    FilterOptions opts_;
    Observer observer_;
    GroundBelief belief_;
    std::size_t step_ = 0;
};

struct GroundResult {
    std::vector<GroundBelief> beliefs;
    std::vector<StepStats> stats;
};

GroundResult ground_filter_trace(const Domain& domain, const std::vector<AnnotationTuple>& trace,
                                 const FilterOptions& opts = {});

/// Total variation distance between two ground distributions.
double total_variation(const GroundBelief& a, const GroundBelief& b);

/// Per-step TV between expand(lifted[i]) and ground[i]. Throws
/// StructuralError on length mismatch.
std::vector<double> compare(const std::vector<Belief>& lifted, const std::vector<GroundBelief>& ground,
                            std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace mhgf
