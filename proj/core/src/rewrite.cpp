#include "mhgf/rewrite.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "mhgf/errors.hpp"

namespace mhgf {
namespace {

struct PEdge {
    Label label;
    std::vector<std::size_t> vars;
    Count multiplicity;
};

// Pattern with a fixed variable order and per-depth anchors and checks.
struct Compiled {
    std::vector<PatternVertex> vertices;
    std::vector<PEdge> edges;
    std::vector<std::size_t> order;
    std::vector<std::optional<std::pair<std::size_t, std::size_t>>> anchor;  // (edge, bound var) per depth
    std::vector<std::vector<std::size_t>> checks;                           // edges completed per depth
};

Compiled compile(std::vector<PatternVertex> vertices, std::vector<PEdge> edges) {
    Compiled c{std::move(vertices), std::move(edges), {}, {}, {}};
    const std::size_t n = c.vertices.size();
    std::vector<std::size_t> degree(n, 0);
    for (const auto& e : c.edges)
        for (auto v : e.vars) ++degree[v];
    std::vector<bool> placed(n, false);
    auto adjacent = [&](std::size_t v) {
        for (const auto& e : c.edges)
            if (std::find(e.vars.begin(), e.vars.end(), v) != e.vars.end())
                for (auto u : e.vars)
                    if (placed[u]) return true;
        return false;
    };
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t best = n;
        auto rank = [&](std::size_t v) {
            return std::tuple(adjacent(v) ? 1 : 0, c.vertices[v].label ? 1 : 0, degree[v]);
        };
        for (std::size_t v = 0; v < n; ++v) {
            if (placed[v]) continue;
            if (best == n || rank(v) > rank(best)) best = v;
        }
        std::optional<std::pair<std::size_t, std::size_t>> anchor;
        for (std::size_t e = 0; e < c.edges.size() && !anchor; ++e) {
            const auto& vars = c.edges[e].vars;
            if (std::find(vars.begin(), vars.end(), best) == vars.end()) continue;
            for (auto u : vars)
                if (placed[u]) {
                    anchor = std::pair(e, u);
                    break;
                }
        }
        placed[best] = true;
        std::vector<std::size_t> checks;
        for (std::size_t e = 0; e < c.edges.size(); ++e) {
            const auto& vars = c.edges[e].vars;
            bool has = std::find(vars.begin(), vars.end(), best) != vars.end();
            bool all = std::all_of(vars.begin(), vars.end(), [&](std::size_t u) { return placed[u]; });
            if (has && all) checks.push_back(e);
        }
        c.order.push_back(best);
        c.anchor.push_back(anchor);
        c.checks.push_back(std::move(checks));
    }
    return c;
}

Compiled compile(const Rule& rule) {
    std::vector<PEdge> edges;
    for (std::size_t e = 0; e < rule.lhs().edges.size(); ++e) {
        const auto& pe = rule.lhs().edges[e];
        edges.push_back({pe.label, rule.edge_vars()[e], pe.multiplicity});
    }
    return compile(rule.lhs().vertices, std::move(edges));
}

// Edges a pattern may bind to. For a lifted state the optimistic view takes
// every bounded edge at its upper bound.
class Target {
public:
    struct TEdge {
        EdgeKey key;
        Count multiplicity;
        bool bounded;
    };

    explicit Target(const MultiHypergraph& g) : table_(*g.table()) {
        for (const auto& e : g.edges()) edges_.push_back({e.key, e.multiplicity, false});
        index();
    }

    explicit Target(const LiftedMultiHypergraph& l) : table_(*l.table()) {
        for (const auto& [key, m] : l.fixed()) edges_.push_back({key, m, false});
        for (const auto& b : l.bounded())
            if (b.upper > 0) edges_.push_back({b.key, b.upper, true});
        std::sort(edges_.begin(), edges_.end(), [](const TEdge& a, const TEdge& b) { return a.key < b.key; });
        index();
    }

    const VertexTable& table() const { return table_; }
    const std::vector<TEdge>& edges() const { return edges_; }
    const std::vector<std::uint32_t>& incident(VertexIndex v) const { return incident_[v]; }

    const TEdge* find(const EdgeKey& key) const {
        auto it = std::lower_bound(edges_.begin(), edges_.end(), key,
                                   [](const TEdge& e, const EdgeKey& k) { return e.key < k; });
        return it != edges_.end() && it->key == key ? &*it : nullptr;
    }

private:
    void index() {
        incident_.assign(table_.size(), {});
        for (std::uint32_t i = 0; i < edges_.size(); ++i) {
            VertexIndex last = static_cast<VertexIndex>(-1);
            for (auto v : edges_[i].key.incidence) {
                if (v != last) incident_[v].push_back(i);
                last = v;
            }
        }
    }

    const VertexTable& table_;
    std::vector<TEdge> edges_;
    std::vector<std::vector<std::uint32_t>> incident_;
};

struct RawMatch {
    std::vector<VertexIndex> assignment;
    bool touches_bounded = false;
};

EdgeKey bind_key(Label label, const std::vector<std::size_t>& vars, const std::vector<VertexIndex>& a) {
    std::vector<VertexIndex> inc;
    inc.reserve(vars.size());
    for (auto v : vars) inc.push_back(a[v]);
    return make_key(label, std::move(inc));
}

bool vertex_fits(const PatternVertex& pv, const Vertex& v) {
    return (!pv.label || *pv.label == v.label) && v.multiplicity >= pv.multiplicity;
}

class Search {
public:
    Search(const Compiled& c, const Target& t)
        : c_(c), t_(t), a_(c.vertices.size(), 0), used_(t.table().size(), false),
          bounded_(c.order.size() + 1, 0) {}

    std::vector<RawMatch> run() {
        go(0);
        return std::move(out_);
    }

private:
    void go(std::size_t depth) {
        if (depth == c_.order.size()) {
            out_.push_back({a_, bounded_[depth] > 0});
            return;
        }
        std::size_t var = c_.order[depth];
        for (auto u : candidates(depth)) {
            if (used_[u] || !vertex_fits(c_.vertices[var], t_.table()[u])) continue;
            a_[var] = u;
            std::size_t touched = bounded_[depth];
            bool ok = true;
            for (auto e : c_.checks[depth]) {
                const auto& pe = c_.edges[e];
                const auto* te = t_.find(bind_key(pe.label, pe.vars, a_));
                if (!te || te->multiplicity < pe.multiplicity) {
                    ok = false;
                    break;
                }
                if (te->bounded) ++touched;
            }
            if (!ok) continue;
            used_[u] = true;
            bounded_[depth + 1] = touched;
            go(depth + 1);
            used_[u] = false;
        }
    }

    std::vector<VertexIndex> candidates(std::size_t depth) const {
        std::vector<VertexIndex> out;
        if (const auto& anchor = c_.anchor[depth]) {
            const auto& pe = c_.edges[anchor->first];
            for (auto i : t_.incident(a_[anchor->second])) {
                const auto& te = t_.edges()[i];
                if (te.key.label != pe.label || te.key.incidence.size() != pe.vars.size()) continue;
                out.insert(out.end(), te.key.incidence.begin(), te.key.incidence.end());
            }
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
        } else {
            out.resize(t_.table().size());
            std::iota(out.begin(), out.end(), VertexIndex{0});
        }
        return out;
    }

    const Compiled& c_;
    const Target& t_;
    std::vector<VertexIndex> a_;
    std::vector<bool> used_;
    std::vector<std::size_t> bounded_;
    std::vector<RawMatch> out_;
};

// One representative per orbit of `assignments` under the automorphisms of `base`.
std::vector<std::size_t> orbit_representatives(const detail::ColoredHypergraph& base,
                                               const std::vector<std::vector<VertexIndex>>& assignments) {
    std::vector<std::size_t> keep(assignments.size());
    std::iota(keep.begin(), keep.end(), std::size_t{0});
    if (assignments.size() <= 1 || detail::refines_to_discrete(base)) return keep;
    keep.clear();
    std::set<std::string> seen;
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        auto marked = base;
        for (std::size_t var = 0; var < assignments[i].size(); ++var) {
            auto& color = marked.vertex_colors[assignments[i][var]];
            detail::put_u8(color, 0xff);
            detail::put_u32(color, static_cast<std::uint32_t>(var));
        }
        if (seen.insert(detail::canonicalize(marked)).second) keep.push_back(i);
    }
    return keep;
}

void sort_by_ids(std::vector<Match>& ms, const VertexTable& t) {
    auto ids = [&](const Match& m) {
        std::vector<std::string_view> out;
        for (auto v : m.assignment) out.push_back(t[v].id);
        return out;
    };
    std::sort(ms.begin(), ms.end(), [&](const Match& a, const Match& b) { return ids(a) < ids(b); });
}

void apply_effect(const Rule& rule, const std::vector<VertexIndex>& a, EdgeMap& edges) {
    for (const auto& r : rule.effect().retract) {
        const auto& pe = rule.lhs().edges[r.edge];
        auto key = bind_key(pe.label, rule.edge_vars()[r.edge], a);
        auto it = edges.find(key);
        Count have = it == edges.end() ? 0 : it->second;
        if (have < r.amount)
            throw EffectError("rule '" + rule.name() + "' retracts " + std::to_string(r.amount) + " from edge '" +
                              pe.label.str() + "' of multiplicity " + std::to_string(have));
        if (have == r.amount) edges.erase(it);
        else it->second -= r.amount;
    }
    for (std::size_t i = 0; i < rule.effect().add.size(); ++i) {
        const auto& ad = rule.effect().add[i];
        edges[bind_key(ad.label, rule.addition_vars()[i], a)] += ad.multiplicity;
    }
}

[[noreturn]] void rethrow_integrity(const Rule& rule, const IntegrityError& e) {
    throw IntegrityError(rule.name(), "rule '" + rule.name() + "' breaks conservation: " + e.what());
}

// Editable copy of a lifted state's edges.
struct Draft {
    struct Slot {
        Count lower;
        Count upper;
        std::optional<std::string> tag;
    };
    EdgeMap fixed;
    std::map<EdgeKey, Slot> bounded;
    std::map<std::string, Count> totals;

    explicit Draft(const LiftedMultiHypergraph& l) : fixed(l.fixed()) {
        for (const auto& b : l.bounded()) {
            std::optional<std::string> tag;
            if (b.group) tag = l.groups()[*b.group].tag;
            bounded.emplace(b.key, Slot{b.lower, b.upper, tag});
        }
        for (const auto& g : l.groups()) totals[g.tag] = g.total;
    }

    LiftedMultiHypergraph finish(const VertexTablePtr& table) const {
        std::vector<LiftedMultiHypergraph::Bounded> bs;
        std::map<std::string, LiftedMultiHypergraph::Group> gs;
        for (const auto& [tag, total] : totals) gs[tag] = {tag, total, {}};
        for (const auto& [key, s] : bounded) {
            if (s.tag) gs[*s.tag].members.push_back(bs.size());
            bs.push_back({key, s.lower, s.upper, std::nullopt});
        }
        std::vector<LiftedMultiHypergraph::Group> groups;
        for (auto& [tag, g] : gs) groups.push_back(std::move(g));
        return LiftedMultiHypergraph::from_parts(table, fixed, std::move(bs), std::move(groups));
    }
};

void add_successor(std::map<CanonicalForm, LiftedSuccessor>& acc, LiftedMultiHypergraph state, double p) {
    auto form = canonical_form_lifted(state);
    auto it = acc.find(form);
    if (it == acc.end()) acc.emplace(form, LiftedSuccessor{std::move(state), form, p});
    else it->second.probability += p;
}

std::vector<LiftedSuccessor> flatten(std::map<CanonicalForm, LiftedSuccessor>& acc) {
    std::vector<LiftedSuccessor> out;
    out.reserve(acc.size());
    for (auto& [form, s] : acc) out.push_back(std::move(s));
    return out;
}

std::optional<LiftedApplication> via_rigid(const Rule& rule, const LiftedMultiHypergraph& l) {
    auto base = detail::colored(l);
    if (!l.is_ground() && !detail::refines_to_discrete(base)) return std::nullopt;
    auto raw = Search(compile(rule), Target(l)).run();
    std::vector<std::vector<VertexIndex>> assigns;
    for (const auto& r : raw) {
        if (r.touches_bounded) return std::nullopt;
        assigns.push_back(r.assignment);
    }
    for (const auto& a : assigns)
        for (std::size_t i = 0; i < rule.effect().add.size(); ++i)
            if (l.find_bounded(bind_key(rule.effect().add[i].label, rule.addition_vars()[i], a))) return std::nullopt;

    LiftedApplication out;
    out.path = LiftPath::rigid;
    auto reps = orbit_representatives(base, assigns);
    if (reps.empty()) return out;
    out.applicability = Applicability::always;
    std::map<CanonicalForm, LiftedSuccessor> acc;
    for (auto i : reps) {
        Draft d(l);
        apply_effect(rule, assigns[i], d.fixed);
        LiftedMultiHypergraph next;
        try {
            next = d.finish(l.table());
        } catch (const IntegrityError& e) {
            rethrow_integrity(rule, e);
        }
        if (next.empty_support())
            throw IntegrityError(rule.name(), "rule '" + rule.name() + "' breaks conservation");
        add_successor(acc, std::move(next), 1.0 / static_cast<double>(reps.size()));
    }
    out.successors = flatten(acc);
    return out;
}

std::optional<LiftedApplication> via_lifted_effect(const Rule& rule, const LiftedMultiHypergraph& l) {
    const auto& le = *rule.lifted_effect();
    const std::size_t hv = rule.var_index(le.variable);
    auto base_colored = detail::colored(l);
    if (!detail::refines_to_discrete(base_colored)) return std::nullopt;

    // Sub-pattern without the variable.
    const auto& lhs = rule.lhs();
    std::vector<std::size_t> sub_of(lhs.vertices.size(), 0), full_of;
    std::vector<PatternVertex> sub_vertices;
    for (std::size_t v = 0; v < lhs.vertices.size(); ++v) {
        if (v == hv) continue;
        sub_of[v] = sub_vertices.size();
        full_of.push_back(v);
        sub_vertices.push_back(lhs.vertices[v]);
    }
    std::vector<PEdge> sub_edges;
    std::vector<std::size_t> h_edges;
    for (std::size_t e = 0; e < lhs.edges.size(); ++e) {
        const auto& vars = rule.edge_vars()[e];
        if (std::find(vars.begin(), vars.end(), hv) != vars.end()) {
            h_edges.push_back(e);
            continue;
        }
        PEdge pe{lhs.edges[e].label, {}, lhs.edges[e].multiplicity};
        for (auto v : vars) pe.vars.push_back(sub_of[v]);
        sub_edges.push_back(std::move(pe));
    }
    std::size_t h_add = 0;
    for (std::size_t i = 0; i < rule.addition_vars().size(); ++i) {
        const auto& vars = rule.addition_vars()[i];
        if (std::find(vars.begin(), vars.end(), hv) != vars.end()) h_add = i;
    }
    auto is_h_edge = [&](std::size_t e) { return std::find(h_edges.begin(), h_edges.end(), e) != h_edges.end(); };

    auto raw = Search(compile(std::move(sub_vertices), std::move(sub_edges)), Target(l)).run();
    std::vector<std::vector<VertexIndex>> assigns;
    for (const auto& r : raw) {
        if (r.touches_bounded) return std::nullopt;
        std::vector<VertexIndex> full(lhs.vertices.size(), 0);
        for (std::size_t s = 0; s < r.assignment.size(); ++s) full[full_of[s]] = r.assignment[s];
        assigns.push_back(std::move(full));
    }
    auto reps = orbit_representatives(base_colored, assigns);

    const VertexTable& t = *l.table();
    const IntervalSystem sys = l.system();
    const std::uint64_t n_all = count_groundings(l);

    struct Candidate {
        VertexIndex h;
        std::vector<std::pair<std::size_t, Count>> uncertain;  // (bounded index, requirement)
    };
    std::vector<std::pair<std::size_t, std::vector<Candidate>>> applicable;
    for (auto i : reps) {
        auto a = assigns[i];
        for (std::size_t k = 0; k < rule.addition_vars().size(); ++k)
            if (k != h_add && l.find_bounded(bind_key(rule.effect().add[k].label, rule.addition_vars()[k], a)))
                return std::nullopt;
        std::vector<bool> taken(t.size(), false);
        for (std::size_t v = 0; v < a.size(); ++v)
            if (v != hv) taken[a[v]] = true;
        std::vector<Candidate> cands;
        bool sure = false;
        for (VertexIndex h = 0; h < t.size(); ++h) {
            if (taken[h] || !vertex_fits(lhs.vertices[hv], t[h])) continue;
            a[hv] = h;
            Candidate c{h, {}};
            bool ok = true;
            for (auto e : h_edges) {
                auto key = bind_key(lhs.edges[e].label, rule.edge_vars()[e], a);
                Count req = lhs.edges[e].multiplicity;
                if (auto it = l.fixed().find(key); it != l.fixed().end()) {
                    if (it->second < req) ok = false;
                } else if (auto b = l.find_bounded(key)) {
                    const auto& be = l.bounded()[*b];
                    if (be.upper < req) ok = false;
                    else if (be.lower < req) c.uncertain.push_back({*b, req});
                } else {
                    ok = false;
                }
                if (!ok) break;
            }
            if (!ok) continue;
            if (c.uncertain.empty()) sure = true;
            cands.push_back(std::move(c));
        }
        if (cands.empty()) continue;
        if (!sure) {
            // Applicable everywhere iff no grounding leaves every candidate short.
            auto vars = sys.vars();
            for (const auto& c : cands) {
                if (c.uncertain.size() != 1) return std::nullopt;
                auto [b, req] = c.uncertain.front();
                vars[b].upper = std::min(vars[b].upper, req - 1);
            }
            IntervalSystem capped(std::move(vars), sys.constraints());
            std::uint64_t blocked = capped.propagate() ? capped.count() : 0;
            if (blocked == n_all) continue;
            if (blocked != 0) return std::nullopt;
        }
        applicable.emplace_back(i, std::move(cands));
    }

    LiftedApplication out;
    out.path = LiftPath::lifted_effect;
    if (applicable.empty()) return out;
    out.applicability = Applicability::always;
    std::map<CanonicalForm, LiftedSuccessor> acc;
    const auto& add = rule.effect().add[h_add];
    for (const auto& [i, cands] : applicable) {
        auto a = assigns[i];
        Draft d(l);
        // Base part of the effect acts on fixed edges only.
        for (const auto& r : rule.effect().retract) {
            if (is_h_edge(r.edge)) continue;
            auto key = bind_key(lhs.edges[r.edge].label, rule.edge_vars()[r.edge], a);
            auto it = d.fixed.find(key);
            if (it == d.fixed.end() || it->second < r.amount)
                throw EffectError("rule '" + rule.name() + "' retracts more than edge '" +
                                  lhs.edges[r.edge].label.str() + "' holds");
            if ((it->second -= r.amount) == 0) d.fixed.erase(it);
        }
        for (std::size_t k = 0; k < rule.effect().add.size(); ++k)
            if (k != h_add)
                d.fixed[bind_key(rule.effect().add[k].label, rule.addition_vars()[k], a)] +=
                    rule.effect().add[k].multiplicity;

        d.totals.try_emplace(le.target_group, 0);
        for (const auto& c : cands) {
            a[hv] = c.h;
            auto key = bind_key(add.label, rule.addition_vars()[h_add], a);
            if (auto it = d.bounded.find(key); it != d.bounded.end()) {
                if (it->second.tag != le.target_group) return std::nullopt;
            } else {
                Count v = 0;
                if (auto f = d.fixed.find(key); f != d.fixed.end()) {
                    v = f->second;
                    d.fixed.erase(f);
                }
                d.bounded.emplace(key, Draft::Slot{v, v, le.target_group});
                d.totals[le.target_group] += v;
            }
            d.bounded[key].upper += le.per_edge_upper_delta;
            for (const auto& r : rule.effect().retract) {
                if (!is_h_edge(r.edge)) continue;
                auto rkey = bind_key(lhs.edges[r.edge].label, rule.edge_vars()[r.edge], a);
                if (auto it = d.bounded.find(rkey); it != d.bounded.end()) {
                    if (it->second.tag) return std::nullopt;
                    it->second.lower = std::max<Count>(0, it->second.lower - r.amount);
                } else if (auto f = d.fixed.find(rkey); f != d.fixed.end()) {
                    Count v = f->second;
                    d.fixed.erase(f);
                    d.bounded.emplace(rkey, Draft::Slot{std::max<Count>(0, v - r.amount), v, std::nullopt});
                }
            }
        }
        Count& total = d.totals[le.target_group];
        total += le.total_delta;
        if (le.cap_to_total)
            for (auto& [key, s] : d.bounded)
                if (s.tag == le.target_group) s.upper = std::min(s.upper, total);
        for (auto& [key, s] : d.bounded)
            if (s.lower > s.upper)
                throw EffectError("lifted effect of rule '" + rule.name() + "' leaves edge '" + key.label.str() +
                                  "' with empty bounds");
        LiftedMultiHypergraph next;
        try {
            next = d.finish(l.table());
        } catch (const IntegrityError& e) {
            rethrow_integrity(rule, e);
        }
        if (next.empty_support())
            throw EffectError("lifted effect of rule '" + rule.name() + "' produced a state with no groundings");
        add_successor(acc, std::move(next), 1.0 / static_cast<double>(applicable.size()));
    }
    out.successors = flatten(acc);
    return out;
}

}  // namespace

Rule::Rule(std::string name, Pattern lhs, Effect effect, std::optional<LiftedEffect> lifted_effect,
           std::string action)
    : name_(std::move(name)),
      action_(action.empty() ? name_ : std::move(action)),
      lhs_(std::move(lhs)),
      effect_(std::move(effect)),
      lifted_effect_(std::move(lifted_effect)) {
    auto fail = [&](const std::string& what) { throw SemanticError(name_, "rule '" + name_ + "': " + what); };
    if (name_.empty()) throw SemanticError("", "rule name must not be empty");
    for (std::size_t v = 0; v < lhs_.vertices.size(); ++v) {
        const auto& pv = lhs_.vertices[v];
        if (pv.var.empty()) fail("pattern variable names must not be empty");
        if (pv.multiplicity < 1) fail("variable '" + pv.var + "' needs multiplicity >= 1");
        if (!var_index_.emplace(pv.var, v).second) fail("variable '" + pv.var + "' declared twice");
    }
    auto resolve = [&](const std::vector<std::string>& vars, const std::string& where) {
        if (vars.empty()) fail(where + " has no incident variables");
        std::vector<std::size_t> out;
        for (const auto& v : vars) {
            auto it = var_index_.find(v);
            if (it == var_index_.end()) fail(where + " uses undeclared variable '" + v + "'");
            out.push_back(it->second);
        }
        return out;
    };
    std::set<std::pair<Label, std::vector<std::size_t>>> seen;
    for (std::size_t e = 0; e < lhs_.edges.size(); ++e) {
        const auto& pe = lhs_.edges[e];
        std::string where = "pattern edge " + std::to_string(e) + " ('" + pe.label.str() + "')";
        if (pe.multiplicity < 1) fail(where + " needs multiplicity >= 1");
        auto vars = resolve(pe.vars, where);
        auto sorted = vars;
        std::sort(sorted.begin(), sorted.end());
        if (!seen.emplace(pe.label, sorted).second) fail(where + " repeats an earlier pattern edge");
        edge_vars_.push_back(std::move(vars));
    }
    std::set<std::size_t> retracted;
    for (const auto& r : effect_.retract) {
        if (r.edge >= lhs_.edges.size()) fail("retraction refers to pattern edge " + std::to_string(r.edge));
        if (!retracted.insert(r.edge).second) fail("pattern edge " + std::to_string(r.edge) + " retracted twice");
        if (r.amount < 1 || r.amount > lhs_.edges[r.edge].multiplicity)
            fail("retraction amount must lie in [1, pattern multiplicity]");
    }
    for (std::size_t i = 0; i < effect_.add.size(); ++i) {
        const auto& ad = effect_.add[i];
        std::string where = "addition " + std::to_string(i) + " ('" + ad.label.str() + "')";
        if (ad.multiplicity < 1) fail(where + " needs multiplicity >= 1");
        add_vars_.push_back(resolve(ad.vars, where));
    }
    if (lifted_effect_) {
        const auto& le = *lifted_effect_;
        auto it = var_index_.find(le.variable);
        if (it == var_index_.end()) fail("lifted effect names undeclared variable '" + le.variable + "'");
        if (le.target_group.empty()) fail("lifted effect needs a target group");
        if (le.per_edge_upper_delta < 0) fail("lifted effect upper delta must be >= 0");
        std::size_t hits = 0;
        for (const auto& vars : add_vars_)
            if (std::find(vars.begin(), vars.end(), it->second) != vars.end()) ++hits;
        if (hits != 1) fail("lifted effect variable must occur in exactly one addition");
    }
}

std::size_t Rule::var_index(std::string_view var) const {
    auto it = var_index_.find(var);
    if (it == var_index_.end()) throw SemanticError(name_, "rule '" + name_ + "' has no variable '" + std::string(var) + "'");
    return it->second;
}

std::map<std::string, std::string> Match::by_id(const Rule& rule, const VertexTable& table) const {
    std::map<std::string, std::string> out;
    for (std::size_t v = 0; v < assignment.size() && v < rule.lhs().vertices.size(); ++v)
        out[rule.lhs().vertices[v].var] = table[assignment[v]].id;
    return out;
}

std::vector<Match> find_matches(const Rule& rule, const MultiHypergraph& g) {
    auto raw = Search(compile(rule), Target(g)).run();
    std::vector<std::vector<VertexIndex>> assigns;
    for (auto& r : raw) assigns.push_back(std::move(r.assignment));
    std::vector<Match> out;
    if (assigns.empty()) return out;
    for (auto i : orbit_representatives(detail::colored(g), assigns)) out.push_back(Match{assigns[i]});
    sort_by_ids(out, *g.table());
    return out;
}

MultiHypergraph apply(const Rule& rule, const Match& m, const MultiHypergraph& g) {
    const auto& lhs = rule.lhs();
    const VertexTable& t = *g.table();
    if (m.assignment.size() != lhs.vertices.size())
        throw EffectError("match for rule '" + rule.name() + "' binds the wrong number of variables");
    std::vector<bool> used(t.size(), false);
    for (std::size_t v = 0; v < m.assignment.size(); ++v) {
        auto u = m.assignment[v];
        if (u >= t.size() || used[u] || !vertex_fits(lhs.vertices[v], t[u]))
            throw EffectError("match does not embed rule '" + rule.name() + "'");
        used[u] = true;
    }
    for (std::size_t e = 0; e < lhs.edges.size(); ++e)
        if (g.multiplicity(bind_key(lhs.edges[e].label, rule.edge_vars()[e], m.assignment)) < lhs.edges[e].multiplicity)
            throw EffectError("match does not embed rule '" + rule.name() + "'");
    EdgeMap edges = g.edge_map();
    apply_effect(rule, m.assignment, edges);
    try {
        return MultiHypergraph::from_edges(g.table(), std::move(edges));
    } catch (const IntegrityError& e) {
        rethrow_integrity(rule, e);
    }
}

std::vector<Successor> successors(const Rule& rule, const MultiHypergraph& g) {
    auto ms = find_matches(rule, g);
    std::map<CanonicalForm, Successor> acc;
    for (const auto& m : ms) {
        auto next = apply(rule, m, g);
        auto form = canonical_form(next);
        double p = 1.0 / static_cast<double>(ms.size());
        auto it = acc.find(form);
        if (it == acc.end()) acc.emplace(form, Successor{std::move(next), form, p});
        else it->second.probability += p;
    }
    std::vector<Successor> out;
    for (auto& [form, s] : acc) out.push_back(std::move(s));
    return out;
}

LiftedApplication lifted_apply_exact(const Rule& rule, const LiftedMultiHypergraph& l, std::uint64_t cap) {
    LiftedApplication out;
    out.path = LiftPath::exact;
    auto grs = enumerate_groundings(l, cap);
    if (grs.empty()) return out;
    std::size_t applicable = 0;
    const double w = 1.0 / static_cast<double>(grs.size());
    std::map<CanonicalForm, LiftedSuccessor> acc;
    for (const auto& g : grs) {
        auto ss = successors(rule, g.graph);
        if (ss.empty()) continue;
        ++applicable;
        for (auto& s : ss) {
            auto it = acc.find(s.form);
            if (it == acc.end())
                acc.emplace(s.form, LiftedSuccessor{LiftedMultiHypergraph::from_ground(s.state), s.form,
                                                    w * s.probability});
            else it->second.probability += w * s.probability;
        }
    }
    out.applicability = applicable == 0            ? Applicability::never
                        : applicable == grs.size() ? Applicability::always
                                                   : Applicability::mixed;
    out.successors = flatten(acc);
    return out;
}

LiftedApplication lifted_apply_detailed(const Rule& rule, const LiftedMultiHypergraph& l, std::uint64_t cap) {
    if (l.empty_support()) return LiftedApplication{};
    if (rule.lifted_effect())
        if (auto r = via_lifted_effect(rule, l)) return std::move(*r);
    if (auto r = via_rigid(rule, l)) return std::move(*r);
    return lifted_apply_exact(rule, l, cap);
}

std::vector<LiftedSuccessor> lifted_apply(const Rule& rule, const LiftedMultiHypergraph& l, std::uint64_t cap) {
    return lifted_apply_detailed(rule, l, cap).successors;
}

}  // namespace mhgf
