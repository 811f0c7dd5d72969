#include "mhgf/interval_system.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "mhgf/errors.hpp"

namespace mhgf {
namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw EnumerationLimitError("grounding count overflows 64 bits");
    return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw EnumerationLimitError("grounding count overflows 64 bits");
    return r;
}

}  // namespace

struct IntervalSystem::Component {
    std::vector<std::size_t> order;  // global var indices in sweep order
    std::vector<std::size_t> cons;   // global constraint indices
};

namespace {

// Memoized sweep over one component.
class Sweep {
public:
    Sweep(const std::vector<IntervalVar>& vars, const std::vector<SumConstraint>& all,
          const std::vector<std::size_t>& order, const std::vector<std::size_t>& cons)
        : vars_(vars), order_(order), k_(order.size()), touching_(k_), active_(k_ + 1), memo_(k_ + 1) {
        std::vector<std::size_t> pos_of(vars.size(), 0);
        for (std::size_t p = 0; p < k_; ++p) pos_of[order[p]] = p;
        totals_.reserve(cons.size());
        for (std::size_t lc = 0; lc < cons.size(); ++lc) {
            const auto& c = all[cons[lc]];
            totals_.push_back(c.total);
            std::vector<std::size_t> ps;
            for (auto v : c.vars) ps.push_back(pos_of[v]);
            std::sort(ps.begin(), ps.end());
            for (auto p : ps) touching_[p].push_back(lc);
            // lo_after[p] / hi_after[p]: bound sums over member positions > p.
            std::vector<Count> lo_after(k_ + 1, 0), hi_after(k_ + 1, 0);
            Count lo = 0, hi = 0;
            std::size_t idx = ps.size();
            for (std::size_t p = k_; p-- > 0;) {
                lo_after[p] = lo;
                hi_after[p] = hi;
                while (idx > 0 && ps[idx - 1] == p) {
                    --idx;
                    lo += vars[order[p]].lower;
                    hi += vars[order[p]].upper;
                }
            }
            full_lo_.push_back(lo);
            full_hi_.push_back(hi);
            lo_after_.push_back(std::move(lo_after));
            hi_after_.push_back(std::move(hi_after));
            if (!ps.empty())
                for (std::size_t p = ps.front() + 1; p <= ps.back(); ++p) active_[p].push_back(lc);
        }
    }

    std::uint64_t count() {
        if (!feasible_start()) return 0;
        std::vector<Count> r(totals_);
        return count_from(0, r);
    }

    void enumerate(const std::function<void(const std::vector<Count>&)>& visit) {
        if (!feasible_start()) return;
        std::vector<Count> r(totals_);
        std::vector<Count> values(k_, 0);
        walk(0, r, values, visit);
    }

private:
    bool feasible_start() const {
        for (std::size_t c = 0; c < totals_.size(); ++c)
            if (totals_[c] < full_lo_[c] || totals_[c] > full_hi_[c]) return false;
        return true;
    }

    bool admissible(std::size_t p, Count v, const std::vector<Count>& r) const {
        for (auto c : touching_[p]) {
            Count rest = r[c] - v;
            if (rest < lo_after_[c][p] || rest > hi_after_[c][p]) return false;
        }
        return true;
    }

    std::uint64_t count_from(std::size_t p, std::vector<Count>& r) {
        if (p == k_) return 1;
        std::vector<Count> key;
        key.reserve(active_[p].size());
        for (auto c : active_[p]) key.push_back(r[c]);
        auto& memo = memo_[p];
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        const auto& var = vars_[order_[p]];
        std::uint64_t total = 0;
        for (Count v = var.lower; v <= var.upper; ++v) {
            if (!admissible(p, v, r)) continue;
            for (auto c : touching_[p]) r[c] -= v;
            total = checked_add(total, count_from(p + 1, r));
            for (auto c : touching_[p]) r[c] += v;
        }
        memo.emplace(std::move(key), total);
        return total;
    }

    void walk(std::size_t p, std::vector<Count>& r, std::vector<Count>& values,
              const std::function<void(const std::vector<Count>&)>& visit) {
        if (p == k_) {
            visit(values);
            return;
        }
        const auto& var = vars_[order_[p]];
        for (Count v = var.lower; v <= var.upper; ++v) {
            if (!admissible(p, v, r)) continue;
            for (auto c : touching_[p]) r[c] -= v;
            if (count_from(p + 1, r) > 0) {
                values[p] = v;
                walk(p + 1, r, values, visit);
            }
            for (auto c : touching_[p]) r[c] += v;
        }
    }

    const std::vector<IntervalVar>& vars_;
    const std::vector<std::size_t>& order_;
    std::size_t k_;
    std::vector<Count> totals_;
    std::vector<Count> full_lo_, full_hi_;
    std::vector<std::vector<Count>> lo_after_, hi_after_;
    std::vector<std::vector<std::size_t>> touching_;
    std::vector<std::vector<std::size_t>> active_;
    std::vector<std::map<std::vector<Count>, std::uint64_t>> memo_;
};

// Greedy sweep order that keeps few constraints open at once.
std::vector<std::size_t> sweep_order(const std::vector<std::size_t>& vars,
                                     const std::vector<std::size_t>& cons,
                                     const std::vector<SumConstraint>& all,
                                     const std::vector<std::vector<std::size_t>>& var_cons) {
    std::map<std::size_t, std::size_t> unplaced;  // constraint -> unplaced member count
    std::map<std::size_t, bool> opened;
    for (auto c : cons) {
        unplaced[c] = all[c].vars.size();
        opened[c] = false;
    }
    std::vector<bool> placed(vars.size(), false);
    std::vector<std::size_t> order;
    order.reserve(vars.size());
    for (std::size_t step = 0; step < vars.size(); ++step) {
        std::size_t best = vars.size();
        long best_score = 0, best_closed = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (placed[i]) continue;
            long opens = 0, closes = 0;
            for (auto c : var_cons[vars[i]]) {
                if (unplaced[c] == 1) ++closes;
                else if (!opened[c]) ++opens;
            }
            long score = opens - closes;
            if (best == vars.size() || score < best_score || (score == best_score && closes > best_closed)) {
                best = i;
                best_score = score;
                best_closed = closes;
            }
        }
        placed[best] = true;
        order.push_back(vars[best]);
        for (auto c : var_cons[vars[best]]) {
            --unplaced[c];
            opened[c] = true;
        }
    }
    return order;
}

}  // namespace

IntervalSystem::IntervalSystem(std::vector<IntervalVar> vars, std::vector<SumConstraint> constraints)
    : vars_(std::move(vars)), constraints_(std::move(constraints)) {
    for (const auto& c : constraints_) {
        auto sorted = c.vars;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw StructuralError("sum constraint lists a variable twice");
        for (auto v : c.vars)
            if (v >= vars_.size()) throw StructuralError("sum constraint refers to an unknown variable");
    }
}

bool IntervalSystem::propagate() {
    for (const auto& v : vars_)
        if (v.lower > v.upper) return false;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& c : constraints_) {
            Count lo = 0, hi = 0;
            for (auto i : c.vars) {
                lo += vars_[i].lower;
                hi += vars_[i].upper;
            }
            if (c.total < lo || c.total > hi) return false;
            for (auto i : c.vars) {
                auto& x = vars_[i];
                Count new_lo = std::max(x.lower, c.total - (hi - x.upper));
                Count new_hi = std::min(x.upper, c.total - (lo - x.lower));
                if (new_lo > new_hi) return false;
                if (new_lo != x.lower || new_hi != x.upper) {
                    lo += new_lo - x.lower;
                    hi += new_hi - x.upper;
                    x.lower = new_lo;
                    x.upper = new_hi;
                    changed = true;
                }
            }
        }
    }
    return true;
}

std::vector<IntervalSystem::Component> IntervalSystem::components() const {
    std::vector<std::size_t> parent(vars_.size());
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& c : constraints_)
        for (std::size_t i = 1; i < c.vars.size(); ++i) parent[find(c.vars[i])] = find(c.vars[0]);

    std::vector<std::vector<std::size_t>> var_cons(vars_.size());
    for (std::size_t c = 0; c < constraints_.size(); ++c)
        for (auto v : constraints_[c].vars) var_cons[v].push_back(c);

    std::map<std::size_t, Component> by_root;
    for (std::size_t v = 0; v < vars_.size(); ++v) by_root[find(v)].order.push_back(v);
    for (std::size_t c = 0; c < constraints_.size(); ++c)
        if (!constraints_[c].vars.empty()) by_root[find(constraints_[c].vars[0])].cons.push_back(c);

    std::vector<Component> out;
    for (auto& [root, comp] : by_root) {
        comp.order = sweep_order(comp.order, comp.cons, constraints_, var_cons);
        out.push_back(std::move(comp));
    }
    return out;
}

std::uint64_t IntervalSystem::count() const {
    for (const auto& c : constraints_)
        if (c.vars.empty() && c.total != 0) return 0;
    std::uint64_t total = 1;
    for (const auto& comp : components()) {
        Sweep sweep(vars_, constraints_, comp.order, comp.cons);
        total = checked_mul(total, sweep.count());
        if (total == 0) return 0;
    }
    return total;
}

void IntervalSystem::enumerate(const std::function<void(std::span<const Count>)>& visit) const {
    for (const auto& c : constraints_)
        if (c.vars.empty() && c.total != 0) return;
    auto comps = components();
    std::vector<std::vector<std::vector<Count>>> partial(comps.size());
    for (std::size_t i = 0; i < comps.size(); ++i) {
        Sweep sweep(vars_, constraints_, comps[i].order, comps[i].cons);
        sweep.enumerate([&](const std::vector<Count>& values) { partial[i].push_back(values); });
        if (partial[i].empty()) return;
    }
    std::vector<Count> assignment(vars_.size(), 0);
    std::vector<std::size_t> digit(comps.size(), 0);
    while (true) {
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const auto& values = partial[i][digit[i]];
            for (std::size_t p = 0; p < comps[i].order.size(); ++p) assignment[comps[i].order[p]] = values[p];
        }
        visit(assignment);
        std::size_t i = comps.size();
        while (i > 0) {
            --i;
            if (++digit[i] < partial[i].size()) break;
            digit[i] = 0;
            if (i == 0) return;
        }
        if (comps.empty()) return;
    }
}

}  // namespace mhgf
