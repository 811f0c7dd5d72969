#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mhgf/multi_hypergraph.hpp"

namespace mhgf {

struct IntervalVar {
    Count lower = 0;
    Count upper = 0;
};

/// sum(vars) == total, unit coefficients, vars pairwise distinct.
struct SumConstraint {
    std::vector<std::size_t> vars;
    Count total = 0;
};

/// Integer variables with interval bounds tied by exact-sum constraints.
///
/// Counting splits the system into independent components and runs a
/// memoized sweep over each component's variables, keyed by the residuals of
/// the constraints that straddle the sweep position. Enumeration reuses the
/// counts to skip branches with no completion.
class IntervalSystem {
public:
    IntervalSystem(std::vector<IntervalVar> vars, std::vector<SumConstraint> constraints);

    const std::vector<IntervalVar>& vars() const noexcept { return vars_; }
    const std::vector<SumConstraint>& constraints() const noexcept { return constraints_; }

    /// Bounds-consistency propagation to a fixpoint. Returns false when some
    /// constraint is shown infeasible; bounds are then unspecified.
    bool propagate();

    /// Exact number of solutions. Throws EnumerationLimitError on 64-bit overflow.
    std::uint64_t count() const;

    /// Visit every solution; values are indexed like vars().
    void enumerate(const std::function<void(std::span<const Count>)>& visit) const;

private:
    struct Component;
    std::vector<Component> components() const;

    std::vector<IntervalVar> vars_;
    std::vector<SumConstraint> constraints_;
};

}  // namespace mhgf
