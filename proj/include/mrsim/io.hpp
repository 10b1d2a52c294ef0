#pragma once

// Locale-independent numeric formatting and small file helpers. All exported
// numbers use 12 significant digits in scientific notation so golden files are
// platform-stable.

#include <string>

namespace mrsim {

std::string fmt12(double v);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void ensure_directory(const std::string& path);

}  // namespace mrsim
