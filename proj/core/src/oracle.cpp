#include "mhgf/oracle.hpp"

#include <cmath>
#include <set>

#include <spdlog/spdlog.h>

#include "mhgf/errors.hpp"

namespace mhgf {

void GroundBelief::add(const CanonicalForm& form, const MultiHypergraph& state, double weight) {
    if (weight <= 0.0) return;
    auto it = entries_.find(form);
    if (it == entries_.end()) entries_.emplace(form, Entry{state, weight});
    else it->second.weight += weight;
}

double GroundBelief::normalize() {
    double z = total();
    if (z > 0.0)
        for (auto& [form, e] : entries_) e.weight /= z;
    return z;
}

double GroundBelief::total() const {
    double z = 0.0;
    for (const auto& [form, e] : entries_) z += e.weight;
    return z;
}

GroundBelief expand(const Belief& b, std::uint64_t cap) {
    GroundBelief out;
    for (const auto& [form, e] : b.entries()) {
        auto grs = enumerate_groundings(e.state, cap);
        const double w = e.weight / static_cast<double>(grs.size());
        for (const auto& g : grs) out.add(g.form, g.graph, w);
    }
    return out;
}

GroundFilter::GroundFilter(const Domain& domain, FilterOptions opts)
    : domain_(domain), opts_(opts), observer_(domain.observation, domain.initial.table()) {
    auto grs = enumerate_groundings(domain.initial, opts_.cap);
    if (grs.empty()) throw StructuralError("initial state has no groundings");
    for (const auto& g : grs) belief_.add(g.form, g.graph, 1.0 / static_cast<double>(grs.size()));
}

StepStats GroundFilter::initial_stats() const {
    StepStats s;
    s.mode = "ground";
    s.lifted_count = belief_.size();
    s.ground_count = belief_.size();
    return s;
}

StepStats GroundFilter::step(const AnnotationTuple& y) {
    const std::size_t k = step_ + 1;
    observer_.validate(y);
    bool known = false;
    for (const auto& r : domain_.rules) known = known || r.action() == y.action;
    if (!known) throw InputError("step " + std::to_string(k) + ": unknown action class '" + y.action + "'");
    auto fail = [&] {
        throw TraceInconsistency(k, "step " + std::to_string(k) + ": no hypothesis explains '" + describe(y) + "'");
    };

    double z_now = 0.0;
    std::vector<const GroundBelief::Entry*> now;
    for (const auto& [form, e] : belief_.entries())
        if (observer_.consistent(e.state, y.loc_t, y.held_t)) {
            now.push_back(&e);
            z_now += e.weight;
        }
    if (z_now <= 0.0) fail();

    // Joint over (x_t, a_t, x_{t+1}), then condition on the annotation.
    double live = 0.0, dead = 0.0;
    GroundBelief next;
    for (const auto* e : now) {
        const double w = e->weight / z_now;
        std::vector<const Rule*> applicable;
        for (const auto& r : domain_.rules)
            if (!find_matches(r, e->state).empty()) applicable.push_back(&r);
        auto p = domain_.action_model.distribution(applicable);
        double mass = 0.0;
        for (double x : p) mass += x;
        if (mass <= 0.0) {
            spdlog::warn("dead end: no applicable rule in ground state (weight {:.3g}); mass dropped", w);
            dead += w;
            continue;
        }
        live += w;
        for (std::size_t i = 0; i < applicable.size(); ++i) {
            if (p[i] <= 0.0 || applicable[i]->action() != y.action) continue;
            for (const auto& s : successors(*applicable[i], e->state))
                if (observer_.consistent(s.state, y.loc_next, y.held_next))
                    next.add(s.form, s.state, w * p[i] * s.probability);
        }
    }
    if (live <= 0.0) fail();
    double z_next = next.normalize() / live;
    if (z_next <= 0.0) fail();

    belief_ = std::move(next);
    step_ = k;
    StepStats s;
    s.step = k;
    s.mode = "ground";
    s.action = y.action;
    s.lifted_count = belief_.size();
    s.ground_count = belief_.size();
    s.log_z = std::log(z_now) + std::log1p(-dead / (dead + live)) + std::log(z_next);
    return s;
}

GroundResult ground_filter_trace(const Domain& domain, const std::vector<AnnotationTuple>& trace,
                                 const FilterOptions& opts) {
    GroundFilter f(domain, opts);
    GroundResult out;
    out.beliefs.push_back(f.belief());
    out.stats.push_back(f.initial_stats());
    for (const auto& y : trace) {
        out.stats.push_back(f.step(y));
        out.beliefs.push_back(f.belief());
    }
    return out;
}

double total_variation(const GroundBelief& a, const GroundBelief& b) {
    double sum = 0.0;
    auto ia = a.entries().begin(), ib = b.entries().begin();
    while (ia != a.entries().end() || ib != b.entries().end()) {
        if (ib == b.entries().end() || (ia != a.entries().end() && ia->first < ib->first)) {
            sum += std::abs(ia->second.weight);
            ++ia;
        } else if (ia == a.entries().end() || ib->first < ia->first) {
            sum += std::abs(ib->second.weight);
            ++ib;
        } else {
            sum += std::abs(ia->second.weight - ib->second.weight);
            ++ia;
            ++ib;
        }
    }
    return 0.5 * sum;
}

std::vector<double> compare(const std::vector<Belief>& lifted, const std::vector<GroundBelief>& ground,
                            std::uint64_t cap) {
    if (lifted.size() != ground.size())
        throw StructuralError("cannot compare " + std::to_string(lifted.size()) + " lifted beliefs with " +
                              std::to_string(ground.size()) + " ground beliefs");
    std::vector<double> out;
    for (std::size_t i = 0; i < lifted.size(); ++i) out.push_back(total_variation(expand(lifted[i], cap), ground[i]));
    return out;
}

}  // namespace mhgf
