// Built-in bookshelf assembly domains.
//
// Screw holes are vertices with capacity one: `open(h)` while free, `at(s, h)`
// once a screw of kind s sits in it. Each hole carries a `joins` edge to the
// two boards it connects and a `pos-<n>` marker so that no two holes of one
// kind are interchangeable.

#include <array>
#include <set>
#include <string>
#include <vector>

#include "mhgf/domain_io.hpp"

namespace mhgf {
namespace {

using json = nlohmann::json;

class Builder {
public:
    void vertex(const std::string& id, const std::string& label, Count multiplicity = 1) {
        vlabels_.insert(label);
        vertices_.push_back({{"id", id}, {"label", label}, {"multiplicity", multiplicity}});
    }

    void edge(const std::string& label, std::vector<std::string> incidence, Count multiplicity = 1) {
        elabels_.insert(label);
        edges_.push_back({{"label", label}, {"incidence", incidence}, {"multiplicity", multiplicity}});
    }

    void edge_label(const std::string& label) { elabels_.insert(label); }

    void hole(const std::string& kind, int n, const std::string& a, const std::string& b) {
        char id[32];
        std::snprintf(id, sizeof id, "%s-%02d", kind.c_str(), n);
        vertex(id, kind + "-hole");
        edge("pos-" + std::to_string(n), {id});
        edge("joins", {id, a, b});
        edge("open", {id});
    }

    json finish(const std::string& name, json conserved_vertices, json rules, json action_model) const {
        json j;
        j["format"] = "mhgf-domain";
        j["version"] = kDomainFormatVersion;
        j["name"] = name;
        j["labels"] = {{"vertex", vlabels_}, {"edge", elabels_}};
        j["conservation"] = {{"edge_labels", {"at", "holds", "open"}}, {"vertex_labels", conserved_vertices}};
        j["initial_state"] = {{"vertices", vertices_}, {"edges", edges_}};
        j["rules"] = rules;
        j["action_model"] = action_model;
        j["observation"] = {
            {"agent", "agent"}, {"location_edge", "at"}, {"held_edge", "holds"}, {"locations", {"floor", "table"}}};
        return j;
    }

private:
    std::set<std::string> vlabels_, elabels_;
    json vertices_ = json::array();
    json edges_ = json::array();
};

json pv(const std::string& var, const std::string& label) { return {{"var", var}, {"label", label}}; }
json pe(const std::string& label, std::vector<std::string> vars) { return {{"label", label}, {"vars", vars}}; }

json carry_rules() {
    json take = {{"name", "take"},
                 {"pattern",
                  {{"vertices", {pv("A", "agent"), pv("P", "*"), pv("O", "*")}},
                   {"edges", {pe("at", {"A", "P"}), pe("place", {"P"}), pe("at", {"O", "P"})}}}},
                 {"effect", {{"retract", {{{"edge", 2}}}}, {"assert", {pe("holds", {"A", "O"})}}}}};
    json put = {{"name", "putDown"},
                {"pattern",
                 {{"vertices", {pv("A", "agent"), pv("P", "*"), pv("O", "*")}},
                  {"edges", {pe("at", {"A", "P"}), pe("place", {"P"}), pe("holds", {"A", "O"})}}}},
                {"effect", {{"retract", {{{"edge", 2}}}}, {"assert", {pe("at", {"O", "P"})}}}}};
    json move = {{"name", "move"},
                 {"pattern",
                  {{"vertices", {pv("A", "agent"), pv("P", "*"), pv("Q", "*")}},
                   {"edges", {pe("at", {"A", "P"}), pe("place", {"P"}), pe("place", {"Q"})}}}},
                 {"effect", {{"retract", {{{"edge", 0}}}}, {"assert", {pe("at", {"A", "Q"})}}}}};
    return {take, put, move};
}

// Screw `kind` goes into an unspecified free hole with `tool` in hand.
json install_rule(const std::string& name, const std::string& kind, const std::string& tool,
                  const std::string& group) {
    return {{"name", name},
            {"pattern",
             {{"vertices", {pv("A", "agent"), pv("S", kind), pv("T", tool), pv("H", kind + "-hole")}},
              {"edges", {pe("holds", {"A", "S"}), pe("holds", {"A", "T"}), pe("open", {"H"})}}}},
            {"effect", {{"retract", {{{"edge", 0}}, {{"edge", 2}}}}, {"assert", {pe("at", {"S", "H"})}}}},
            {"lifted_effect", {{"variable", "H"}, {"target_group", group}}}};
}

void places(Builder& b) {
    b.vertex("agent", "agent");
    b.vertex("floor", "floor");
    b.vertex("table", "table");
    b.edge("place", {"floor"});
    b.edge("place", {"table"});
    b.edge("at", {"agent", "floor"});
    b.edge_label("holds");
}

}  // namespace

Domain bookshelf_domain() {
    Builder b;
    places(b);
    const std::array<std::string, 7> boards = {"side-panel-left", "side-panel-right", "top-panel", "bottom-panel",
                                               "shelf-board",     "back-panel",       "plinth"};
    for (const auto& id : boards) b.vertex(id, id);

    b.vertex("eccentric", "eccentric", 16);
    b.vertex("dowel", "dowel", 16);
    b.vertex("bolt", "bolt", 8);
    b.edge("at", {"eccentric", "table"}, 16);
    b.edge("at", {"dowel", "table"}, 16);
    b.edge("at", {"bolt", "table"}, 8);

    const std::array<std::string, 9> tools = {"screwdriver", "hammer", "allen-key", "drill",       "tape-measure",
                                              "pencil",      "mallet", "pliers",    "spirit-level"};
    for (std::size_t i = 0; i < tools.size(); ++i) {
        b.vertex(tools[i], tools[i]);
        b.edge("at", {tools[i], i < 3 ? "table" : "floor"});
    }

    using Pair = std::array<const char*, 2>;
    const std::array<Pair, 4> ecc = {
        Pair{"side-panel-left", "top-panel"}, Pair{"side-panel-right", "top-panel"},
        Pair{"side-panel-left", "bottom-panel"}, Pair{"side-panel-right", "bottom-panel"}};
    const std::array<Pair, 4> dow = {
        Pair{"side-panel-left", "shelf-board"}, Pair{"side-panel-right", "shelf-board"},
        Pair{"side-panel-left", "top-panel"}, Pair{"side-panel-right", "bottom-panel"}};
    const std::array<Pair, 4> bol = {
        Pair{"back-panel", "side-panel-left"}, Pair{"back-panel", "side-panel-right"},
        Pair{"plinth", "side-panel-left"}, Pair{"plinth", "side-panel-right"}};
    for (int n = 1; n <= 16; ++n) b.hole("eccentric", n, ecc[(n - 1) / 4][0], ecc[(n - 1) / 4][1]);
    for (int n = 1; n <= 16; ++n) b.hole("dowel", n, dow[(n - 1) / 4][0], dow[(n - 1) / 4][1]);
    for (int n = 1; n <= 8; ++n) b.hole("bolt", n, bol[(n - 1) / 2][0], bol[(n - 1) / 2][1]);

    json conserved = {"eccentric", "dowel", "bolt", "eccentric-hole", "dowel-hole", "bolt-hole"};
    for (const auto& t : tools) conserved.push_back(t);
    json rules = carry_rules();
    rules.push_back(install_rule("installEccentric", "eccentric", "screwdriver", "eccentric-installed"));
    rules.push_back(install_rule("insertDowel", "dowel", "hammer", "dowel-inserted"));
    rules.push_back(install_rule("connectBoards", "bolt", "allen-key", "bolt-connected"));
    json am = {{"kind", "weighted"},
               {"weights",
                {{"take", 4.0},
                 {"putDown", 1.0},
                 {"move", 1.0},
                 {"installEccentric", 8.0},
                 {"insertDowel", 8.0},
                 {"connectBoards", 8.0}}}};
    return domain_from_json(b.finish("bookshelf", conserved, rules, am));
}

Domain bookshelf_mini_domain() {
    Builder b;
    places(b);
    b.vertex("side-panel", "side-panel");
    b.vertex("top-panel", "top-panel");
    b.vertex("eccentric", "eccentric", 4);
    b.vertex("screwdriver", "screwdriver");
    b.edge("at", {"eccentric", "table"}, 4);
    b.edge("at", {"screwdriver", "floor"});
    for (int n = 1; n <= 4; ++n) b.hole("eccentric", n, "side-panel", "top-panel");
    json rules = carry_rules();
    rules.push_back(install_rule("installEccentric", "eccentric", "screwdriver", "eccentric-installed"));
    return domain_from_json(
        b.finish("bookshelf-mini", {"eccentric", "screwdriver", "eccentric-hole"}, rules, {{"kind", "uniform"}}));
}

}  // namespace mhgf
