#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace uqsim {

/// Writes to a sibling temporary and renames over the target, so readers
/// never observe a partial file. Throws InputError on I/O failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Whole file as a string. Throws InputError when unreadable.
[[nodiscard]] std::string read_file(const std::filesystem::path& path);

/// Shortest decimal form that reads back to the same double.
[[nodiscard]] std::string format_double(double value);

}  // namespace uqsim
