#include "dsqed/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dsqed {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string to_csv(const ScanResult& result) {
    result.validate();
    std::string out;
    for (const auto& [k, v] : result.metadata)
        out += "# " + k + " = " + v + "\n";
    out += result.abscissa_name;
    for (const auto& name : result.column_names) out += "," + name;
    out += "\n";
    for (size_t i = 0; i < result.abscissa.size(); ++i) {
        out += format_double(result.abscissa[i]);
        for (const auto& col : result.columns) out += "," + format_double(col[i]);
        out += "\n";
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed for " + path);
}

} // namespace dsqed
