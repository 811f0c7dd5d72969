#include "mhgf/domain_io.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "mhgf/errors.hpp"

namespace mhgf {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& id, const std::string& what) { throw SemanticError(id, what); }

const json& field(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) bad(where, where + ": missing field '" + key + "'");
    return *it;
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    if (!obj.is_object()) bad(where, where + ": expected an object");
    for (const auto& [k, v] : obj.items()) {
        bool ok = false;
        for (const char* allowed : keys) ok = ok || k == allowed;
        if (!ok) bad(where, where + ": unknown field '" + k + "'");
    }
}

std::string text(const json& v, const std::string& where) {
    if (!v.is_string() || v.get_ref<const std::string&>().empty()) bad(where, where + ": expected a non-empty string");
    return v.get<std::string>();
}

Count integer(const json& v, const std::string& where, Count min) {
    if (!v.is_number_integer()) bad(where, where + ": expected an integer");
    Count x = v.get<Count>();
    if (x < min) bad(where, where + ": must be >= " + std::to_string(min));
    return x;
}

const json& array(const json& v, const std::string& where) {
    if (!v.is_array()) bad(where, where + ": expected an array");
    return v;
}

std::string at(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

std::vector<std::string> strings(const json& v, const std::string& where) {
    std::vector<std::string> out;
    const auto& arr = array(v, where);
    for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(text(arr[i], at(where, i)));
    return out;
}

Count integer_or(const json& obj, const char* key, Count fallback, const std::string& where, Count min) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : integer(*it, where + "." + key, min);
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

class DomainReader {
public:
    Domain read(const json& j) {
        only_keys(j, {"format", "version", "name", "labels", "conservation", "initial_state", "rules", "action_model",
                      "observation"},
                  "domain");
        if (text(field(j, "format", "domain"), "format") != "mhgf-domain")
            bad("format", "format: expected \"mhgf-domain\"");
        if (integer(field(j, "version", "domain"), "version", 0) != kDomainFormatVersion)
            bad("version", "version: only version " + std::to_string(kDomainFormatVersion) + " is supported");
        Domain d;
        d.name = text(field(j, "name", "domain"), "name");
        read_labels(field(j, "labels", "domain"), d);
        read_conservation(field(j, "conservation", "domain"), d);
        read_initial(field(j, "initial_state", "domain"), d);
        read_rules(field(j, "rules", "domain"), d);
        read_action_model(field(j, "action_model", "domain"), d);
        read_observation(field(j, "observation", "domain"), d);
        return d;
    }

private:
    Label vertex_label(const json& v, const std::string& where) {
        Label l(text(v, where));
        if (!d_->vertex_labels.contains(l)) bad(l.str(), where + ": undeclared vertex label '" + l.str() + "'");
        return l;
    }

    Label edge_label(const json& v, const std::string& where) {
        Label l(text(v, where));
        if (!d_->edge_labels.contains(l)) bad(l.str(), where + ": undeclared edge label '" + l.str() + "'");
        return l;
    }

    void read_labels(const json& j, Domain& d) {
        d_ = &d;
        only_keys(j, {"vertex", "edge"}, "labels");
        for (const auto& s : strings(field(j, "vertex", "labels"), "labels.vertex")) d.vertex_labels.insert(Label(s));
        for (const auto& s : strings(field(j, "edge", "labels"), "labels.edge")) d.edge_labels.insert(Label(s));
    }

    void read_conservation(const json& j, Domain& d) {
        only_keys(j, {"edge_labels", "vertex_labels"}, "conservation");
        const auto& e = array(field(j, "edge_labels", "conservation"), "conservation.edge_labels");
        for (std::size_t i = 0; i < e.size(); ++i)
            d.conservation.edge_labels.insert(edge_label(e[i], at("conservation.edge_labels", i)));
        const auto& v = array(field(j, "vertex_labels", "conservation"), "conservation.vertex_labels");
        for (std::size_t i = 0; i < v.size(); ++i)
            d.conservation.vertex_labels.insert(vertex_label(v[i], at("conservation.vertex_labels", i)));
    }

    void read_initial(const json& j, Domain& d) {
        const std::string w = "initial_state";
        only_keys(j, {"vertices", "edges", "bounded_edges", "constraints"}, w);
        std::vector<Vertex> vertices;
        const auto& vs = array(field(j, "vertices", w), w + ".vertices");
        for (std::size_t i = 0; i < vs.size(); ++i) {
            std::string p = at(w + ".vertices", i);
            only_keys(vs[i], {"id", "label", "multiplicity"}, p);
            vertices.push_back(Vertex{text(field(vs[i], "id", p), p + ".id"),
                                      vertex_label(field(vs[i], "label", p), p + ".label"),
                                      integer_or(vs[i], "multiplicity", 1, p, 1)});
        }
        std::vector<Hyperedge> edges;
        if (j.contains("edges")) {
            const auto& es = array(j["edges"], w + ".edges");
            for (std::size_t i = 0; i < es.size(); ++i) {
                std::string p = at(w + ".edges", i);
                only_keys(es[i], {"label", "incidence", "multiplicity"}, p);
                edges.push_back(Hyperedge{edge_label(field(es[i], "label", p), p + ".label"),
                                          strings(field(es[i], "incidence", p), p + ".incidence"),
                                          integer_or(es[i], "multiplicity", 1, p, 1)});
            }
        }
        std::vector<BoundedEdge> bounded;
        if (j.contains("bounded_edges")) {
            const auto& bs = array(j["bounded_edges"], w + ".bounded_edges");
            for (std::size_t i = 0; i < bs.size(); ++i) {
                std::string p = at(w + ".bounded_edges", i);
                only_keys(bs[i], {"label", "incidence", "lower", "upper"}, p);
                bounded.push_back(BoundedEdge{edge_label(field(bs[i], "label", p), p + ".label"),
                                              strings(field(bs[i], "incidence", p), p + ".incidence"),
                                              integer(field(bs[i], "lower", p), p + ".lower", 0),
                                              integer(field(bs[i], "upper", p), p + ".upper", 0)});
            }
        }
        std::vector<TotalConstraint> constraints;
        if (j.contains("constraints")) {
            const auto& cs = array(j["constraints"], w + ".constraints");
            for (std::size_t i = 0; i < cs.size(); ++i) {
                std::string p = at(w + ".constraints", i);
                only_keys(cs[i], {"tag", "edges", "total"}, p);
                TotalConstraint c{text(field(cs[i], "tag", p), p + ".tag"), {},
                                  integer(field(cs[i], "total", p), p + ".total", 0)};
                const auto& idx = array(field(cs[i], "edges", p), p + ".edges");
                for (std::size_t k = 0; k < idx.size(); ++k)
                    c.edges.push_back(static_cast<std::size_t>(integer(idx[k], at(p + ".edges", k), 0)));
                constraints.push_back(std::move(c));
            }
        }
        try {
            d.initial = LiftedMultiHypergraph::build(std::move(vertices), std::move(edges), std::move(bounded),
                                                     std::move(constraints), d.conservation);
        } catch (const StructuralError& e) {
            bad(w, w + ": " + e.what());
        }
        if (d.initial.empty_support()) bad(w, w + ": the initial state has no grounding");
    }

    void read_rules(const json& j, Domain& d) {
        const auto& rs = array(j, "rules");
        std::set<std::string> names;
        for (std::size_t i = 0; i < rs.size(); ++i) {
            std::string p = at("rules", i);
            only_keys(rs[i], {"name", "action", "pattern", "effect", "lifted_effect"}, p);
            std::string name = text(field(rs[i], "name", p), p + ".name");
            p = "rule '" + name + "'";
            if (!names.insert(name).second) bad(name, "duplicate rule name '" + name + "'");
            std::string action = rs[i].contains("action") ? text(rs[i]["action"], p + ".action") : name;

            Pattern lhs;
            const auto& pj = field(rs[i], "pattern", p);
            only_keys(pj, {"vertices", "edges"}, p + ".pattern");
            const auto& pv = array(field(pj, "vertices", p + ".pattern"), p + ".pattern.vertices");
            for (std::size_t k = 0; k < pv.size(); ++k) {
                std::string q = at(p + ".pattern.vertices", k);
                only_keys(pv[k], {"var", "label", "multiplicity"}, q);
                PatternVertex v{text(field(pv[k], "var", q), q + ".var"), std::nullopt,
                                integer_or(pv[k], "multiplicity", 1, q, 1)};
                if (text(field(pv[k], "label", q), q + ".label") != "*")
                    v.label = vertex_label(pv[k]["label"], q + ".label");
                lhs.vertices.push_back(std::move(v));
            }
            if (pj.contains("edges")) {
                const auto& pe = array(pj["edges"], p + ".pattern.edges");
                for (std::size_t k = 0; k < pe.size(); ++k) {
                    std::string q = at(p + ".pattern.edges", k);
                    only_keys(pe[k], {"label", "vars", "multiplicity"}, q);
                    lhs.edges.push_back(PatternEdge{edge_label(field(pe[k], "label", q), q + ".label"),
                                                    strings(field(pe[k], "vars", q), q + ".vars"),
                                                    integer_or(pe[k], "multiplicity", 1, q, 1)});
                }
            }

            Effect effect;
            const auto& ej = field(rs[i], "effect", p);
            only_keys(ej, {"retract", "assert"}, p + ".effect");
            if (ej.contains("retract")) {
                const auto& rj = array(ej["retract"], p + ".effect.retract");
                for (std::size_t k = 0; k < rj.size(); ++k) {
                    std::string q = at(p + ".effect.retract", k);
                    only_keys(rj[k], {"edge", "amount"}, q);
                    effect.retract.push_back(Retraction{static_cast<std::size_t>(integer(field(rj[k], "edge", q),
                                                                                         q + ".edge", 0)),
                                                        integer_or(rj[k], "amount", 1, q, 1)});
                }
            }
            if (ej.contains("assert")) {
                const auto& aj = array(ej["assert"], p + ".effect.assert");
                for (std::size_t k = 0; k < aj.size(); ++k) {
                    std::string q = at(p + ".effect.assert", k);
                    only_keys(aj[k], {"label", "vars", "multiplicity"}, q);
                    effect.add.push_back(Addition{edge_label(field(aj[k], "label", q), q + ".label"),
                                                  strings(field(aj[k], "vars", q), q + ".vars"),
                                                  integer_or(aj[k], "multiplicity", 1, q, 1)});
                }
            }

            std::optional<LiftedEffect> lifted;
            if (rs[i].contains("lifted_effect")) {
                const auto& lj = rs[i]["lifted_effect"];
                std::string q = p + ".lifted_effect";
                only_keys(lj, {"variable", "target_group", "total_delta", "per_edge_upper_delta", "cap_to_total"}, q);
                LiftedEffect le;
                le.variable = text(field(lj, "variable", q), q + ".variable");
                le.target_group = text(field(lj, "target_group", q), q + ".target_group");
                le.total_delta = lj.contains("total_delta") ? integer(lj["total_delta"], q + ".total_delta",
                                                                      std::numeric_limits<Count>::min())
                                                            : 1;
                le.per_edge_upper_delta = integer_or(lj, "per_edge_upper_delta", 1, q, 0);
                if (lj.contains("cap_to_total")) {
                    if (!lj["cap_to_total"].is_boolean()) bad(name, q + ".cap_to_total: expected a boolean");
                    le.cap_to_total = lj["cap_to_total"].get<bool>();
                }
                lifted = le;
            }
            d.rules.emplace_back(name, std::move(lhs), std::move(effect), std::move(lifted), action);
        }
    }

    void read_action_model(const json& j, Domain& d) {
        only_keys(j, {"kind", "weights"}, "action_model");
        std::string kind = text(field(j, "kind", "action_model"), "action_model.kind");
        if (kind == "uniform") {
            d.action_model.kind = ActionModel::Kind::uniform;
            if (j.contains("weights")) bad("action_model", "action_model: a uniform model takes no weights");
        } else if (kind == "weighted") {
            d.action_model.kind = ActionModel::Kind::weighted;
            const auto& wj = field(j, "weights", "action_model");
            if (!wj.is_object()) bad("action_model", "action_model.weights: expected an object");
            for (const auto& [name, w] : wj.items()) {
                if (!d.find_rule(name)) bad(name, "action_model.weights: unknown rule '" + name + "'");
                if (!w.is_number() || w.get<double>() < 0.0)
                    bad(name, "action_model.weights." + name + ": expected a non-negative number");
                d.action_model.weights[name] = w.get<double>();
            }
        } else {
            bad(kind, "action_model.kind: expected \"uniform\" or \"weighted\"");
        }
    }

    void read_observation(const json& j, Domain& d) {
        const std::string w = "observation";
        only_keys(j, {"agent", "location_edge", "held_edge", "locations"}, w);
        d.observation.agent = text(field(j, "agent", w), w + ".agent");
        d.observation.location_edge = edge_label(field(j, "location_edge", w), w + ".location_edge");
        d.observation.held_edge = edge_label(field(j, "held_edge", w), w + ".held_edge");
        const auto& ls = array(field(j, "locations", w), w + ".locations");
        for (std::size_t i = 0; i < ls.size(); ++i)
            d.observation.locations.push_back(vertex_label(ls[i], at(w + ".locations", i)));
        Observer check(d.observation, d.initial.table());
    }

    Domain* d_ = nullptr;
};

ojson strings_json(const std::vector<std::string>& v) {
    ojson out = ojson::array();
    for (const auto& s : v) out.push_back(s);
    return out;
}

ojson held_json(const HeldMap& held) {
    ojson out = ojson::object();
    for (const auto& [label, n] : held) out[label.str()] = n;
    return out;
}

HeldMap held_from(const json& v, std::size_t line, const char* key) {
    if (!v.is_object()) throw ParseError(std::string(key) + ": expected an object of label counts", line, 1);
    HeldMap out;
    for (const auto& [label, n] : v.items()) {
        if (label.empty()) throw ParseError(std::string(key) + ": empty label", line, 1);
        if (!n.is_number_integer()) throw ParseError(std::string(key) + "." + label + ": expected an integer", line, 1);
        Count c = n.get<Count>();
        if (c < 0) throw ParseError(std::string(key) + "." + label + ": negative count", line, 1);
        out[Label(label)] = c;
    }
    return out;
}

// Top-bit sampling; identical on every standard library.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t draw(std::mt19937_64& rng, const std::vector<double>& p) {
    double u = uniform01(rng), acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        last = i;
        acc += p[i];
        if (u < acc) return i;
    }
    return last;
}

}  // namespace

Domain domain_from_json(const nlohmann::json& j) { return DomainReader().read(j); }

Domain parse_domain(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        auto [line, col] = line_column(text, e.byte);
        throw ParseError("domain: " + std::string(e.what()), line, col);
    }
    return domain_from_json(j);
}

nlohmann::ordered_json domain_to_json(const Domain& d) {
    ojson j;
    j["format"] = "mhgf-domain";
    j["version"] = kDomainFormatVersion;
    j["name"] = d.name;
    ojson labels;
    labels["vertex"] = ojson::array();
    for (auto l : d.vertex_labels) labels["vertex"].push_back(l.str());
    labels["edge"] = ojson::array();
    for (auto l : d.edge_labels) labels["edge"].push_back(l.str());
    j["labels"] = labels;
    ojson cons;
    cons["edge_labels"] = ojson::array();
    for (auto l : d.conservation.edge_labels) cons["edge_labels"].push_back(l.str());
    cons["vertex_labels"] = ojson::array();
    for (auto l : d.conservation.vertex_labels) cons["vertex_labels"].push_back(l.str());
    j["conservation"] = cons;

    ojson init;
    init["vertices"] = ojson::array();
    for (const auto& v : d.initial.table()->vertices())
        init["vertices"].push_back(ojson{{"id", v.id}, {"label", v.label.str()}, {"multiplicity", v.multiplicity}});
    init["edges"] = ojson::array();
    for (const auto& e : d.initial.fixed_edges())
        init["edges"].push_back(
            ojson{{"label", e.label.str()}, {"incidence", strings_json(e.incidence)}, {"multiplicity", e.multiplicity}});
    auto bounded = d.initial.bounded_edges();
    if (!bounded.empty()) {
        init["bounded_edges"] = ojson::array();
        for (const auto& b : bounded)
            init["bounded_edges"].push_back(ojson{{"label", b.label.str()},
                                                  {"incidence", strings_json(b.incidence)},
                                                  {"lower", b.lower},
                                                  {"upper", b.upper}});
        init["constraints"] = ojson::array();
        for (const auto& c : d.initial.constraints())
            init["constraints"].push_back(ojson{{"tag", c.tag}, {"edges", c.edges}, {"total", c.total}});
    }
    j["initial_state"] = init;

    j["rules"] = ojson::array();
    for (const auto& r : d.rules) {
        ojson rj;
        rj["name"] = r.name();
        rj["action"] = r.action();
        ojson pv = ojson::array();
        for (const auto& v : r.lhs().vertices)
            pv.push_back(ojson{{"var", v.var}, {"label", v.label ? v.label->str() : "*"}, {"multiplicity", v.multiplicity}});
        ojson pe = ojson::array();
        for (const auto& e : r.lhs().edges)
            pe.push_back(ojson{{"label", e.label.str()}, {"vars", strings_json(e.vars)}, {"multiplicity", e.multiplicity}});
        rj["pattern"] = ojson{{"vertices", pv}, {"edges", pe}};
        ojson retract = ojson::array();
        for (const auto& x : r.effect().retract) retract.push_back(ojson{{"edge", x.edge}, {"amount", x.amount}});
        ojson add = ojson::array();
        for (const auto& a : r.effect().add)
            add.push_back(ojson{{"label", a.label.str()}, {"vars", strings_json(a.vars)}, {"multiplicity", a.multiplicity}});
        rj["effect"] = ojson{{"retract", retract}, {"assert", add}};
        if (const auto& le = r.lifted_effect())
            rj["lifted_effect"] = ojson{{"variable", le->variable},
                                        {"target_group", le->target_group},
                                        {"total_delta", le->total_delta},
                                        {"per_edge_upper_delta", le->per_edge_upper_delta},
                                        {"cap_to_total", le->cap_to_total}};
        j["rules"].push_back(rj);
    }

    ojson am;
    if (d.action_model.kind == ActionModel::Kind::uniform) {
        am["kind"] = "uniform";
    } else {
        am["kind"] = "weighted";
        am["weights"] = ojson::object();
        for (const auto& [name, w] : d.action_model.weights) am["weights"][name] = w;
    }
    j["action_model"] = am;
    ojson obs;
    obs["agent"] = d.observation.agent;
    obs["location_edge"] = d.observation.location_edge.str();
    obs["held_edge"] = d.observation.held_edge.str();
    obs["locations"] = ojson::array();
    for (auto l : d.observation.locations) obs["locations"].push_back(l.str());
    j["observation"] = obs;
    return j;
}

std::string serialize_domain(const Domain& d) { return domain_to_json(d).dump(2) + "\n"; }

std::vector<AnnotationTuple> parse_trace(std::string_view text) {
    std::vector<AnnotationTuple> out;
    std::size_t line_no = 0, start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
            if (end == text.size()) break;
            continue;
        }
        json j;
        try {
            j = json::parse(line.begin(), line.end());
        } catch (const json::parse_error& e) {
            throw ParseError("trace line " + std::to_string(line_no) + ": " + e.what(), line_no,
                             std::max<std::size_t>(1, e.byte));
        }
        auto fail = [&](const std::string& what) {
            throw ParseError("trace line " + std::to_string(line_no) + ": " + what, line_no, 1);
        };
        if (!j.is_object()) fail("expected an object");
        for (const auto& [k, v] : j.items())
            if (k != "v" && k != "action" && k != "loc_t" && k != "loc_next" && k != "held_t" && k != "held_next")
                fail("unknown field '" + k + "'");
        if (j.contains("v") && (!j["v"].is_number_integer() || j["v"].get<int>() != kTraceFormatVersion))
            fail("unsupported trace version");
        auto str = [&](const char* key) {
            if (!j.contains(key)) fail(std::string("missing field '") + key + "'");
            if (!j[key].is_string() || j[key].get_ref<const std::string&>().empty())
                fail(std::string(key) + ": expected a non-empty string");
            return j[key].get<std::string>();
        };
        AnnotationTuple y;
        y.action = str("action");
        y.loc_t = Label(str("loc_t"));
        y.loc_next = Label(str("loc_next"));
        for (const char* key : {"held_t", "held_next"})
            if (!j.contains(key)) fail(std::string("missing field '") + key + "'");
        y.held_t = held_from(j["held_t"], line_no, "held_t");
        y.held_next = held_from(j["held_next"], line_no, "held_next");
        out.push_back(std::move(y));
        if (end == text.size()) break;
    }
    return out;
}

std::string serialize_trace(const std::vector<AnnotationTuple>& trace) {
    std::string out;
    for (const auto& y : trace) {
        ojson j;
        j["v"] = kTraceFormatVersion;
        j["action"] = y.action;
        j["loc_t"] = y.loc_t.str();
        j["loc_next"] = y.loc_next.str();
        j["held_t"] = held_json(y.held_t);
        j["held_next"] = held_json(y.held_next);
        out += j.dump() + "\n";
    }
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error while reading '" + path.string() + "'");
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("error while writing '" + path.string() + "'");
}

Domain load_domain(const std::filesystem::path& path) { return parse_domain(read_file(path)); }

std::vector<AnnotationTuple> load_trace(const std::filesystem::path& path) { return parse_trace(read_file(path)); }

Domain resolve_domain(std::string_view spec) {
    if (spec == "builtin:bookshelf") return bookshelf_domain();
    if (spec == "builtin:bookshelf-mini") return bookshelf_mini_domain();
    if (spec.starts_with("builtin:")) throw IoError("unknown built-in domain '" + std::string(spec) + "'");
    return load_domain(std::filesystem::path(spec));
}

GeneratedTrace generate_trace(const Domain& d, std::uint64_t seed, std::size_t length,
                              std::optional<std::size_t> corrupt_at) {
    std::mt19937_64 rng(seed);
    GeneratedTrace out;
    Observer obs(d.observation, d.initial.table());
    auto start = enumerate_groundings(d.initial);
    MultiHypergraph state = start[start.size() == 1 ? 0 : rng() % start.size()].graph;
    for (std::size_t t = 0; t < length; ++t) {
        std::vector<const Rule*> applicable;
        for (const auto& r : d.rules)
            if (!find_matches(r, state).empty()) applicable.push_back(&r);
        auto p = d.action_model.distribution(applicable);
        bool any = false;
        for (double x : p) any = any || x > 0.0;
        if (!any) {
            out.dead_end = true;
            break;
        }
        const Rule& rule = *applicable[draw(rng, p)];
        auto succ = successors(rule, state);
        std::vector<double> q;
        for (const auto& s : succ) q.push_back(s.probability);
        MultiHypergraph next = succ[draw(rng, q)].state;
        out.tuples.push_back(
            AnnotationTuple{rule.action(), obs.location_of(state), obs.location_of(next), obs.held_by(state),
                            obs.held_by(next)});
        state = std::move(next);
    }
    if (corrupt_at && *corrupt_at >= 1 && *corrupt_at <= out.tuples.size()) {
        auto& y = out.tuples[*corrupt_at - 1];
        std::vector<Label> others;
        for (auto l : d.observation.locations)
            if (l != y.loc_t) others.push_back(l);
        if (!others.empty()) {
            y.loc_t = others[rng() % others.size()];
            out.corrupted_at = corrupt_at;
        }
    }
    return out;
}

}  // namespace mhgf
