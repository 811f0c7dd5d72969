#include "mhgf/canonical.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace mhgf {
namespace detail {

void put_u8(std::string& out, std::uint8_t v) { out.push_back(static_cast<char>(v)); }

void put_u32(std::string& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

void put_str(std::string& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out += s;
}

std::string vertex_color(const Vertex& v) {
    std::string c;
    put_str(c, v.label.str());
    put_u64(c, static_cast<std::uint64_t>(v.multiplicity));
    return c;
}

std::string fixed_edge_color(Label label, Count multiplicity) {
    std::string c;
    put_u8(c, 0);
    put_str(c, label.str());
    put_u64(c, static_cast<std::uint64_t>(multiplicity));
    return c;
}

namespace {

// Order-preserving renumbering onto 0..k-1.
void densify(std::vector<std::uint32_t>& colors) {
    std::vector<std::uint32_t> values(colors);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (auto& c : colors)
        c = static_cast<std::uint32_t>(std::lower_bound(values.begin(), values.end(), c) - values.begin());
}

std::size_t distinct(const std::vector<std::uint32_t>& colors) {
    std::vector<std::uint32_t> c(colors);
    std::sort(c.begin(), c.end());
    return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
}

class Canonizer {
public:
    explicit Canonizer(const ColoredHypergraph& g) : g_(g), n_(g.vertex_colors.size()), start_(n_ + 1, 0) {
        const std::size_t m = g.edges.size();
        std::vector<std::uint32_t> order(m);
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return g.edges[a].color < g.edges[b].color; });
        edge_color_.assign(m, 0);
        for (std::size_t i = 1; i < m; ++i)
            edge_color_[order[i]] =
                edge_color_[order[i - 1]] + (g.edges[order[i]].color != g.edges[order[i - 1]].color ? 1u : 0u);

        sorted_inc_.resize(m);
        for (std::uint32_t e = 0; e < m; ++e) {
            auto& inc = sorted_inc_[e];
            inc = g.edges[e].incidence;
            std::sort(inc.begin(), inc.end());
            for (std::size_t i = 0; i < inc.size(); ++i)
                if (i == 0 || inc[i] != inc[i - 1]) ++start_[inc[i] + 1];
        }
        for (std::size_t v = 0; v < n_; ++v) start_[v + 1] += start_[v];
        inc_.resize(start_[n_]);
        std::vector<std::uint32_t> fill(start_.begin(), start_.end() - 1);
        for (std::uint32_t e = 0; e < m; ++e) {
            const auto& inc = sorted_inc_[e];
            for (std::size_t i = 0; i < inc.size();) {
                std::size_t j = i;
                while (j < inc.size() && inc[j] == inc[i]) ++j;
                inc_[fill[inc[i]]++] = {e, static_cast<std::uint32_t>(j - i)};
                i = j;
            }
        }

        std::vector<std::uint32_t> vorder(n_);
        std::iota(vorder.begin(), vorder.end(), 0u);
        std::sort(vorder.begin(), vorder.end(),
                  [&](auto a, auto b) { return g.vertex_colors[a] < g.vertex_colors[b]; });
        initial_.assign(n_, 0);
        for (std::size_t i = 1; i < n_; ++i)
            initial_[vorder[i]] = initial_[vorder[i - 1]] +
                                  (g.vertex_colors[vorder[i]] != g.vertex_colors[vorder[i - 1]] ? 1u : 0u);
    }

    std::string run() {
        search(initial_);
        return *best_;
    }

    bool discrete_after_refinement() {
        auto colors = initial_;
        return refine(colors) == n_;
    }

private:
    struct Incidence {
        std::uint32_t edge;
        std::uint32_t count;
    };

    // Iterated color refinement; returns the number of color classes.
    // Each pass ranks edges by (color, sorted member colors); a vertex is
    // then described by its color and the sorted (edge rank, count) pairs.
    std::size_t refine(std::vector<std::uint32_t>& colors) const {
        densify(colors);
        std::size_t classes = distinct(colors);
        const std::size_t m = g_.edges.size();
        std::vector<std::vector<std::uint32_t>> ekey(m);
        std::vector<std::uint32_t> eorder(m), erank(m);
        std::vector<std::vector<std::uint64_t>> sig(n_);
        std::vector<std::uint32_t> order(n_);
        while (classes < n_) {
            for (std::size_t e = 0; e < m; ++e) {
                auto& k = ekey[e];
                k.clear();
                k.push_back(edge_color_[e]);
                for (VertexIndex u : g_.edges[e].incidence) k.push_back(colors[u]);
                std::sort(k.begin() + 1, k.end());
            }
            std::iota(eorder.begin(), eorder.end(), 0u);
            std::sort(eorder.begin(), eorder.end(), [&](auto a, auto b) { return ekey[a] < ekey[b]; });
            for (std::size_t i = 0, r = 0; i < m; ++i) {
                if (i > 0 && ekey[eorder[i]] != ekey[eorder[i - 1]]) ++r;
                erank[eorder[i]] = static_cast<std::uint32_t>(r);
            }
            for (std::size_t v = 0; v < n_; ++v) {
                auto& s = sig[v];
                s.clear();
                s.push_back(colors[v]);
                for (auto k = start_[v]; k < start_[v + 1]; ++k)
                    s.push_back((std::uint64_t{erank[inc_[k].edge]} << 32) | inc_[k].count);
                std::sort(s.begin() + 1, s.end());
            }
            std::iota(order.begin(), order.end(), 0u);
            std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sig[a] < sig[b]; });
            std::uint32_t r = 0;
            for (std::size_t i = 0; i < n_; ++i) {
                if (i > 0 && sig[order[i]] != sig[order[i - 1]]) ++r;
                colors[order[i]] = r;
            }
            std::size_t next = n_ == 0 ? 0 : static_cast<std::size_t>(r) + 1;
            if (next == classes) break;
            classes = next;
        }
        return classes;
    }

    // Edge records are ordered by (color rank, canonical positions).
    std::string serialize(const std::vector<std::uint32_t>& pos) const {
        std::vector<VertexIndex> inv(n_);
        for (VertexIndex v = 0; v < n_; ++v) inv[pos[v]] = v;
        const std::size_t m = g_.edges.size();
        std::vector<std::vector<std::uint32_t>> rec(m);
        std::size_t bytes = 9;
        for (VertexIndex p = 0; p < n_; ++p) bytes += 4 + g_.vertex_colors[inv[p]].size();
        for (std::size_t e = 0; e < m; ++e) {
            auto& r = rec[e];
            r.reserve(g_.edges[e].incidence.size() + 1);
            r.push_back(edge_color_[e]);
            for (VertexIndex v : g_.edges[e].incidence) r.push_back(pos[v]);
            std::sort(r.begin() + 1, r.end());
            bytes += 12 + g_.edges[e].color.size() + 4 * (r.size() - 1);
        }
        std::vector<std::uint32_t> order(m);
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return rec[a] < rec[b]; });

        std::string out;
        out.reserve(bytes);
        put_u8(out, kCanonicalVersion);
        put_u32(out, static_cast<std::uint32_t>(n_));
        for (VertexIndex p = 0; p < n_; ++p) put_str(out, g_.vertex_colors[inv[p]]);
        put_u32(out, static_cast<std::uint32_t>(m));
        for (auto e : order) {
            const auto& color = g_.edges[e].color;
            const auto& r = rec[e];
            put_u32(out, static_cast<std::uint32_t>(4 + color.size() + 4 + 4 * (r.size() - 1)));
            put_str(out, color);
            put_u32(out, static_cast<std::uint32_t>(r.size() - 1));
            for (std::size_t i = 1; i < r.size(); ++i) put_u32(out, r[i]);
        }
        return out;
    }

    bool transposition_is_automorphism(VertexIndex a, VertexIndex b) const {
        using Record = std::pair<std::uint32_t, std::vector<VertexIndex>>;
        std::vector<std::uint32_t> touched;
        for (auto k = start_[a]; k < start_[a + 1]; ++k) touched.push_back(inc_[k].edge);
        for (auto k = start_[b]; k < start_[b + 1]; ++k) touched.push_back(inc_[k].edge);
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        std::vector<Record> before, after;
        for (auto e : touched) {
            auto inc = sorted_inc_[e];
            before.emplace_back(edge_color_[e], inc);
            for (auto& v : inc) v = v == a ? b : (v == b ? a : v);
            std::sort(inc.begin(), inc.end());
            after.emplace_back(edge_color_[e], std::move(inc));
        }
        std::sort(before.begin(), before.end());
        std::sort(after.begin(), after.end());
        return before == after;
    }

    void search(std::vector<std::uint32_t> colors) {
        if (refine(colors) == n_) {
            auto s = serialize(colors);
            if (!best_ || s < *best_) best_ = std::move(s);
            return;
        }
        // First non-singleton cell in color order.
        std::vector<std::size_t> cell_size(n_, 0);
        for (auto c : colors) ++cell_size[c];
        std::uint32_t target = 0;
        while (cell_size[target] < 2) ++target;
        std::vector<VertexIndex> members;
        for (VertexIndex v = 0; v < n_; ++v)
            if (colors[v] == target) members.push_back(v);

        std::vector<VertexIndex> reps;
        for (VertexIndex m : members) {
            bool twin = std::any_of(reps.begin(), reps.end(),
                                    [&](VertexIndex r) { return transposition_is_automorphism(r, m); });
            if (!twin) reps.push_back(m);
        }
        for (VertexIndex v : reps) {
            std::vector<std::uint32_t> next(n_);
            for (VertexIndex u = 0; u < n_; ++u)
                next[u] = 2 * colors[u] + ((colors[u] == target && u != v) ? 1u : 0u);
            search(std::move(next));
        }
    }

    const ColoredHypergraph& g_;
    std::size_t n_;
    std::vector<std::uint32_t> start_;  // CSR offsets into inc_
    std::vector<Incidence> inc_;
    std::vector<std::vector<VertexIndex>> sorted_inc_;
    std::vector<std::uint32_t> edge_color_;
    std::vector<std::uint32_t> initial_;
    std::optional<std::string> best_;
};

}  // namespace

std::string canonicalize(const ColoredHypergraph& g) { return Canonizer(g).run(); }

bool refines_to_discrete(const ColoredHypergraph& g) { return Canonizer(g).discrete_after_refinement(); }

ColoredHypergraph colored(const MultiHypergraph& g) {
    ColoredHypergraph c;
    c.vertex_colors.reserve(g.vertex_count());
    for (const auto& v : g.vertices()) c.vertex_colors.push_back(vertex_color(v));
    c.edges.reserve(g.edges().size());
    for (const auto& e : g.edges())
        c.edges.push_back({fixed_edge_color(e.label(), e.multiplicity), e.incidence()});
    return c;
}

}  // namespace detail

std::string CanonicalForm::digest() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[i] = hex[h & 0xf];
    return out;
}

CanonicalForm canonical_form(const MultiHypergraph& g) {
    return CanonicalForm{detail::canonicalize(detail::colored(g))};
}

bool is_isomorphic(const MultiHypergraph& a, const MultiHypergraph& b) {
    if (a.vertex_count() != b.vertex_count() || a.edges().size() != b.edges().size()) return false;
    return canonical_form(a) == canonical_form(b);
}

}  // namespace mhgf
