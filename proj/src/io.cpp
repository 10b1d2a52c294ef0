#include "mrsim/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mrsim/errors.hpp"

namespace mrsim {

std::string fmt12(double v) {
    char buf[40];
    // snprintf with "%.*e" is locale-sensitive for the decimal separator only
    // through LC_NUMERIC; main() pins the C locale, and tests run under it too.
    std::snprintf(buf, sizeof(buf), "%.11e", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ResourceError("cannot open for writing: " + path);
    out << content;
    if (!out) throw ResourceError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ResourceError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw ResourceError("cannot create directory " + path + ": " + ec.message());
}

}  // namespace mrsim
