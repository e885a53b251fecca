#ifndef LOTBENCH_IO_UTIL_HPP
#define LOTBENCH_IO_UTIL_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lotbench {

// Writes via a temporary sibling and renames into place, so readers never
// observe a partial artifact.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);  // throws IOError

std::vector<std::string> read_lines(const std::filesystem::path& path);

// FNV-1a of the file content; used for idempotence checks in the manifest.
std::uint64_t hash_file(const std::filesystem::path& path);

std::string to_hex_u64(std::uint64_t value);

// Fixed-precision decimal formatting for CSV cells (no locale surprises).
std::string format_fixed(double value, int decimals);

}  // namespace lotbench

#endif  // LOTBENCH_IO_UTIL_HPP
