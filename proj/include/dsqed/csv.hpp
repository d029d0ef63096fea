#pragma once

#include <string>

#include "dsqed/scan.hpp"

namespace dsqed {

// Fixed 12-significant-digit formatting so identical inputs produce
// byte-identical files.
std::string format_double(double x);

// '#'-prefixed metadata block, header row, LF-terminated data rows.
std::string to_csv(const ScanResult& result);

void write_text_file(const std::string& path, const std::string& content);

} // namespace dsqed
