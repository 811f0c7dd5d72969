#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "mhgf/multi_hypergraph.hpp"

namespace mhgf {

/// Byte string identifying an isomorphism class.
///
/// Layout (version 1, all integers fixed-width big-endian):
///   u8  version (0x01)
///   u32 vertex count, then per vertex in canonical order: u32 length, record
///   u32 edge count,   then per edge, ordered by color then positions: u32 length, record
/// A vertex record is `u32 len, label bytes, u64 multiplicity`. An edge record
/// is `u32 len, color bytes, u32 arity, u32 position...` where the positions
/// are canonical vertex positions in ascending order and the color of a
/// ground edge is `u8 0x00, u32 len, label bytes, u64 multiplicity`.
struct CanonicalForm {
    std::string bytes;

    friend bool operator==(const CanonicalForm&, const CanonicalForm&) = default;
    friend std::strong_ordering operator<=>(const CanonicalForm& a, const CanonicalForm& b) {
        int c = a.bytes.compare(b.bytes);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    /// Short stable digest for logs and reports.
    std::string digest() const;
};

inline constexpr std::uint8_t kCanonicalVersion = 1;

CanonicalForm canonical_form(const MultiHypergraph& g);
bool is_isomorphic(const MultiHypergraph& a, const MultiHypergraph& b);

namespace detail {

/// Generic vertex- and edge-colored hypergraph fed to the canonizer.
struct ColoredHypergraph {
    struct Edge {
        std::string color;
        std::vector<VertexIndex> incidence;  // multiset
    };
    std::vector<std::string> vertex_colors;
    std::vector<Edge> edges;
};

/// Canonical bytes under color refinement with individualization. Vertices
/// whose transposition is an automorphism are explored once per class.
std::string canonicalize(const ColoredHypergraph& g);

/// True when color refinement alone separates every vertex, which implies the
/// colored graph has no non-trivial automorphism.
bool refines_to_discrete(const ColoredHypergraph& g);

ColoredHypergraph colored(const MultiHypergraph& g);

void put_u8(std::string& out, std::uint8_t v);
void put_u32(std::string& out, std::uint32_t v);
void put_u64(std::string& out, std::uint64_t v);
void put_str(std::string& out, const std::string& s);

std::string vertex_color(const Vertex& v);
std::string fixed_edge_color(Label label, Count multiplicity);

}  // namespace detail
}  // namespace mhgf
