#include "mhgf/filter.hpp"

#include <cmath>

#include <spdlog/spdlog.h>

#include "mhgf/errors.hpp"

namespace mhgf {

std::vector<double> ActionModel::distribution(const std::vector<const Rule*>& applicable) const {
    std::vector<double> w;
    w.reserve(applicable.size());
    for (const auto* r : applicable) {
        if (kind == Kind::uniform) {
            w.push_back(1.0);
            continue;
        }
        auto it = weights.find(r->name());
        w.push_back(it == weights.end() ? 1.0 : std::max(0.0, it->second));
    }
    double sum = 0.0;
    for (double x : w) sum += x;
    for (double& x : w) x = sum > 0.0 ? x / sum : 0.0;
    return w;
}

const Rule* Domain::find_rule(std::string_view rule_name) const {
    for (const auto& r : rules)
        if (r.name() == rule_name) return &r;
    return nullptr;
}

std::vector<std::string> Domain::actions() const {
    std::vector<std::string> out;
    for (const auto& r : rules)
        if (std::find(out.begin(), out.end(), r.action()) == out.end()) out.push_back(r.action());
    return out;
}

Belief::Belief(const LiftedMultiHypergraph& state) {
    if (state.empty_support()) throw StructuralError("initial state has no groundings");
    add(state, 1.0);
}

void Belief::add(LiftedMultiHypergraph state, double weight) {
    if (weight <= 0.0 || state.empty_support()) return;
    auto form = canonical_form_lifted(state);
    add(form, std::move(state), weight);
}

void Belief::add(const CanonicalForm& form, LiftedMultiHypergraph state, double weight) {
    if (weight <= 0.0 || state.empty_support()) return;
    auto it = entries_.find(form);
    if (it == entries_.end()) entries_.emplace(form, Entry{std::move(state), weight});
    else it->second.weight += weight;
}

double Belief::normalize() {
    double z = total();
    if (z > 0.0)
        for (auto& [form, e] : entries_) e.weight /= z;
    return z;
}

double Belief::total() const {
    double z = 0.0;
    for (const auto& [form, e] : entries_) z += e.weight;
    return z;
}

std::uint64_t Belief::ground_count() const {
    std::uint64_t n = 0;
    for (const auto& [form, e] : entries_) {
        if (__builtin_add_overflow(n, count_groundings(e.state), &n))
            throw EnumerationLimitError("ground-equivalent count overflows 64 bits");
    }
    return n;
}

namespace {

class Predictor {
public:
    Predictor(const std::vector<Rule>& rules, const ActionModel& am, const FilterOptions& opts)
        : rules_(rules), am_(am), opts_(opts) {}

    void run(const CanonicalForm& form, const LiftedMultiHypergraph& l, double w) {
        std::vector<LiftedApplication> apps;
        apps.reserve(rules_.size());
        for (const auto& r : rules_) {
            apps.push_back(lifted_apply_detailed(r, l, opts_.cap));
            if (apps.back().applicability == Applicability::mixed) {
                auto grs = enumerate_groundings(l, opts_.cap);
                const double share = w / static_cast<double>(grs.size());
                for (auto& g : grs) run(g.form, LiftedMultiHypergraph::from_ground(g.graph), share);
                return;
            }
        }
        std::vector<const Rule*> applicable;
        std::vector<const LiftedApplication*> results;
        for (std::size_t i = 0; i < rules_.size(); ++i)
            if (apps[i].applicability == Applicability::always) {
                applicable.push_back(&rules_[i]);
                results.push_back(&apps[i]);
            }
        auto p = am_.distribution(applicable);
        bool any = false;
        for (double x : p) any = any || x > 0.0;
        if (!any) {
            spdlog::warn("dead end: no applicable rule in state {} (weight {:.3g}); mass dropped", form.digest(), w);
            out_.dead_end_mass += w;
            return;
        }
        auto pred = std::make_shared<const LiftedMultiHypergraph>(l);
        for (std::size_t i = 0; i < applicable.size(); ++i) {
            if (p[i] <= 0.0) continue;
            for (const auto& s : results[i]->successors)
                out_.particles.push_back(Particle{form, pred, applicable[i], s.state, s.form, w * p[i] * s.probability});
        }
    }

    JointPrediction finish() {
        double live = 0.0;
        for (const auto& p : out_.particles) live += p.weight;
        double all = live + out_.dead_end_mass;
        if (all > 0.0) out_.dead_end_mass /= all;
        if (live > 0.0)
            for (auto& p : out_.particles) p.weight /= live;
        return std::move(out_);
    }

private:
    const std::vector<Rule>& rules_;
    const ActionModel& am_;
    const FilterOptions& opts_;
    JointPrediction out_;
};

}  // namespace

JointPrediction predict(const Belief& b, const std::vector<Rule>& rules, const ActionModel& am,
                        const FilterOptions& opts) {
    Predictor pr(rules, am, opts);
    for (const auto& [form, e] : b.entries()) pr.run(form, e.state, e.weight);
    return pr.finish();
}

bool consistent(const Observer& obs, const AnnotationTuple& y, const LiftedMultiHypergraph& x_t, const Rule& a,
                const LiftedMultiHypergraph& x_next, std::uint64_t cap) {
    obs.validate(y);
    if (a.action() != y.action) return false;
    return !obs.restrict(x_t, y.loc_t, y.held_t, cap).empty() &&
           !obs.restrict(x_next, y.loc_next, y.held_next, cap).empty();
}

Belief update(const JointPrediction& j, const AnnotationTuple& y, const Observer& obs, std::size_t step, double* z,
              const FilterOptions& opts) {
    obs.validate(y);
    std::map<CanonicalForm, double> pred_share;
    Belief out;
    for (const auto& p : j.particles) {
        if (p.rule->action() != y.action) continue;
        auto it = pred_share.find(p.predecessor);
        if (it == pred_share.end()) {
            double share = 0.0;
            for (const auto& r : obs.restrict(*p.predecessor_state, y.loc_t, y.held_t, opts.cap)) share += r.share;
            if (share > 1e-12 && std::abs(share - 1.0) > 1e-12)
                throw StructuralError("predecessor " + p.predecessor.digest() +
                                      " is only partly consistent with the annotation; restrict it before predicting");
            it = pred_share.emplace(p.predecessor, share).first;
        }
        if (it->second <= 1e-12) continue;
        for (auto& r : obs.restrict(p.successor, y.loc_next, y.held_next, opts.cap)) {
            if (r.unchanged) out.add(p.successor_form, std::move(r.state), p.weight * r.share);
            else out.add(std::move(r.state), p.weight * r.share);
        }
    }
    double total = out.normalize();
    if (z) *z = total;
    if (total <= 0.0)
        throw TraceInconsistency(step, "step " + std::to_string(step) + ": no hypothesis explains '" + describe(y) + "'");
    return out;
}

nlohmann::json to_json(const StepStats& s) {
    return nlohmann::json{{"step", s.step},
                          {"mode", s.mode},
                          {"action", s.action},
                          {"lifted_count", s.lifted_count},
                          {"ground_count", s.ground_count},
                          {"log_z", s.log_z}};
}

LiftedFilter::LiftedFilter(const Domain& domain, FilterOptions opts)
    : domain_(domain), opts_(opts), observer_(domain.observation, domain.initial.table()), belief_(domain.initial) {}

StepStats LiftedFilter::initial_stats() const {
    StepStats s;
    s.lifted_count = belief_.size();
    s.ground_count = belief_.ground_count();
    return s;
}

StepStats LiftedFilter::step(const AnnotationTuple& y) {
    const std::size_t k = step_ + 1;
    observer_.validate(y);
    bool known = false;
    for (const auto& r : domain_.rules) known = known || r.action() == y.action;
    if (!known) throw InputError("step " + std::to_string(k) + ": unknown action class '" + y.action + "'");

    Belief now;
    for (const auto& [form, e] : belief_.entries())
        for (auto& r : observer_.restrict(e.state, y.loc_t, y.held_t, opts_.cap)) {
            if (r.unchanged) now.add(form, std::move(r.state), e.weight * r.share);
            else now.add(std::move(r.state), e.weight * r.share);
        }
    double z_now = now.normalize();
    if (z_now <= 0.0)
        throw TraceInconsistency(k, "step " + std::to_string(k) + ": no hypothesis explains '" + describe(y) + "'");

    auto j = predict(now, domain_.rules, domain_.action_model, opts_);
    double z_next = 0.0;
    Belief next = update(j, y, observer_, k, &z_next, opts_);

    belief_ = std::move(next);
    step_ = k;
    StepStats s;
    s.step = k;
    s.action = y.action;
    s.lifted_count = belief_.size();
    s.ground_count = belief_.ground_count();
    s.log_z = std::log(z_now) + std::log1p(-j.dead_end_mass) + std::log(z_next);
    return s;
}

FilterResult filter_trace(const Domain& domain, const std::vector<AnnotationTuple>& trace, const FilterOptions& opts) {
    LiftedFilter f(domain, opts);
    FilterResult out;
    out.beliefs.push_back(f.belief());
    out.stats.push_back(f.initial_stats());
    for (const auto& y : trace) {
        out.stats.push_back(f.step(y));
        out.beliefs.push_back(f.belief());
    }
    return out;
}

}  // namespace mhgf
