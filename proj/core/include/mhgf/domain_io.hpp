#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mhgf/domain.hpp"

namespace mhgf {

inline constexpr int kDomainFormatVersion = 1;
inline constexpr int kTraceFormatVersion = 1;

/// Throws ParseError (line/column) on malformed JSON, SemanticError naming
/// the offending identifier on schema or reference problems, IntegrityError
/// when the initial state breaks conservation.
Domain parse_domain(std::string_view text);
Domain domain_from_json(const nlohmann::json& j);
nlohmann::ordered_json domain_to_json(const Domain& d);
/// Deterministic pretty-printed JSON with a trailing newline.
std::string serialize_domain(const Domain& d);

/// JSON lines, one tuple per non-blank line. Throws ParseError carrying the
/// 1-based line number.
std::vector<AnnotationTuple> parse_trace(std::string_view text);
std::string serialize_trace(const std::vector<AnnotationTuple>& trace);

/// File wrappers; IoError when the file cannot be read or written.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);
Domain load_domain(const std::filesystem::path& path);
std::vector<AnnotationTuple> load_trace(const std::filesystem::path& path);

/// 7 boards, 40 screws in three kinds, 9 tools, one agent, two places.
Domain bookshelf_domain();
/// 2 boards, 4 eccentrics, one screwdriver, two places.
Domain bookshelf_mini_domain();
/// "builtin:bookshelf" / "builtin:bookshelf-mini" or a file path.
Domain resolve_domain(std::string_view spec);

struct GeneratedTrace {
    std::vector<AnnotationTuple> tuples;
    bool dead_end = false;                   // stopped early: nothing applicable
    std::optional<std::size_t> corrupted_at;  // 1-based step actually corrupted
};

/// Forward simulation from a uniformly drawn grounding of the initial state.
/// Rules are drawn from the action model, successors by their match share.
/// Corruption replaces loc_t at step `corrupt_at` (1-based) with another
/// declared location. Deterministic for a given seed on every platform.
GeneratedTrace generate_trace(const Domain& d, std::uint64_t seed, std::size_t length,
                              std::optional<std::size_t> corrupt_at = std::nullopt);

}  // namespace mhgf
