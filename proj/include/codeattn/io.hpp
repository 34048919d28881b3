#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace codeattn {

/// Whole file as bytes. Throws Error{Io}.
std::string read_text_file(const std::filesystem::path& file);

/// Writes to a sibling temporary and renames it over `file`, creating parent
/// directories as needed. Throws Error{Io}.
void write_file_atomic(const std::filesystem::path& file, std::string_view bytes);

}  // namespace codeattn
