#include "mhgf/observation.hpp"

#include <algorithm>

#include "mhgf/errors.hpp"

namespace mhgf {
namespace {

std::string describe(const HeldMap& held) {
    std::string out = "[";
    for (const auto& [label, n] : held) {
        if (out.size() > 1) out += ", ";
        out += label.str() + ":" + std::to_string(n);
    }
    return out + "]";
}

}  // namespace

std::string describe(const AnnotationTuple& y) {
    return y.action + " " + y.loc_t.str() + "->" + y.loc_next.str() + " " + describe(y.held_t) + " -> " +
           describe(y.held_next);
}

Observer::Observer(ObservationModel model, VertexTablePtr table) : model_(std::move(model)), table_(std::move(table)) {
    const VertexTable& t = *table_;
    auto agent = t.find(model_.agent);
    if (!agent) throw SemanticError(model_.agent, "observation agent '" + model_.agent + "' is not a vertex");
    agent_ = *agent;
    for (auto loc : model_.locations) loc_keys_[loc];
    for (VertexIndex v = 0; v < t.size(); ++v) {
        if (v == agent_) continue;
        Label label = t[v].label;
        if (auto it = loc_keys_.find(label); it != loc_keys_.end())
            it->second.push_back(make_key(model_.location_edge, {agent_, v}));
        held_keys_[label].push_back(make_key(model_.held_edge, {agent_, v}));
    }
    for (const auto& [loc, keys] : loc_keys_)
        if (keys.empty()) throw SemanticError(loc.str(), "no vertex carries location label '" + loc.str() + "'");
}

void Observer::validate(const AnnotationTuple& y) const {
    for (auto loc : {y.loc_t, y.loc_next})
        if (!loc_keys_.contains(loc)) throw InputError("'" + loc.str() + "' is not a declared location");
    for (const auto* held : {&y.held_t, &y.held_next})
        for (const auto& [label, n] : *held)
            if (n < 0) throw InputError("negative held count for '" + label.str() + "'");
}

std::vector<Observer::Requirement> Observer::requirements(Label loc, const HeldMap& held) const {
    if (!loc_keys_.contains(loc)) throw InputError("'" + loc.str() + "' is not a declared location");
    std::vector<Requirement> out;
    for (const auto& [label, keys] : loc_keys_) out.push_back({&keys, label == loc ? 1 : 0});
    for (const auto& [label, keys] : held_keys_) {
        auto it = held.find(label);
        out.push_back({&keys, it == held.end() ? 0 : it->second});
    }
    for (const auto& [label, n] : held) {
        if (n < 0) throw InputError("negative held count for '" + label.str() + "'");
        if (n > 0 && !held_keys_.contains(label)) out.push_back({&no_keys_, n});
    }
    return out;
}

bool Observer::consistent(const MultiHypergraph& g, Label loc, const HeldMap& held) const {
    for (const auto& r : requirements(loc, held)) {
        Count sum = 0;
        for (const auto& key : *r.keys) sum += g.multiplicity(key);
        if (sum != r.value) return false;
    }
    return true;
}

std::vector<Restriction> Observer::restrict(const LiftedMultiHypergraph& l, Label loc, const HeldMap& held,
                                            std::uint64_t cap) const {
    if (l.empty_support()) return {};
    auto reqs = requirements(loc, held);
    std::map<std::size_t, Count> pins;
    bool split = false;
    for (const auto& r : reqs) {
        Count fixed = 0;
        std::vector<std::size_t> open;
        for (const auto& key : *r.keys) {
            if (auto it = l.fixed().find(key); it != l.fixed().end()) fixed += it->second;
            else if (auto b = l.find_bounded(key)) open.push_back(*b);
        }
        if (open.empty()) {
            if (fixed != r.value) return {};
        } else if (open.size() == 1) {
            Count v = r.value - fixed;
            const auto& b = l.bounded()[open.front()];
            if (v < b.lower || v > b.upper) return {};
            pins[open.front()] = v;
        } else {
            split = true;
        }
    }
    if (split) {
        std::vector<Restriction> out;
        auto grs = enumerate_groundings(l, cap);
        const double share = 1.0 / static_cast<double>(grs.size());
        for (auto& g : grs)
            if (consistent(g.graph, loc, held)) out.push_back({LiftedMultiHypergraph::from_ground(g.graph), share});
        return out;
    }
    if (pins.empty()) return {{l, 1.0, true}};
    auto bounded = l.bounded();
    for (auto [i, v] : pins) bounded[i].lower = bounded[i].upper = v;
    auto tight = LiftedMultiHypergraph::from_parts(l.table(), l.fixed(), std::move(bounded), l.groups());
    std::uint64_t kept = count_groundings(tight);
    if (kept == 0) return {};
    return {{std::move(tight), static_cast<double>(kept) / static_cast<double>(count_groundings(l))}};
}

Label Observer::location_of(const MultiHypergraph& g) const {
    for (const auto& [label, keys] : loc_keys_)
        for (const auto& key : keys)
            if (g.multiplicity(key) > 0) return label;
    return Label();
}

HeldMap Observer::held_by(const MultiHypergraph& g) const {
    HeldMap out;
    for (const auto& [label, keys] : held_keys_) {
        Count sum = 0;
        for (const auto& key : keys) sum += g.multiplicity(key);
        if (sum > 0) out[label] = sum;
    }
    return out;
}

}  // namespace mhgf
