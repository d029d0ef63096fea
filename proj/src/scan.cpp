#include "dsqed/scan.hpp"

#include <stdexcept>

namespace dsqed {

std::vector<double> Grid::points() const {
    if (count < 1) throw std::invalid_argument("Grid: count must be >= 1");
    std::vector<double> p(static_cast<size_t>(count));
    if (count == 1) {
        p[0] = start;
        return p;
    }
    const double h = (stop - start) / (count - 1);
    for (int i = 0; i < count; ++i) p[static_cast<size_t>(i)] = start + h * i;
    p.back() = stop;
    return p;
}

void ScanResult::add_column(const std::string& name, std::vector<double> values) {
    column_names.push_back(name);
    columns.push_back(std::move(values));
}

void ScanResult::add_metadata(const std::string& key, const std::string& value) {
    metadata.emplace_back(key, value);
}

const std::vector<double>& ScanResult::column(const std::string& name) const {
    for (size_t i = 0; i < column_names.size(); ++i)
        if (column_names[i] == name) return columns[i];
    throw std::out_of_range("ScanResult: no column named " + name);
}

void ScanResult::validate() const {
    for (const auto& c : columns)
        if (c.size() != abscissa.size())
            throw std::logic_error("ScanResult: column length mismatch");
    for (size_t i = 1; i < abscissa.size(); ++i) {
        if (abscissa[i] == abscissa[i - 1] ||
            (abscissa[i] > abscissa[i - 1]) != (abscissa[1] > abscissa[0]))
            throw std::logic_error("ScanResult: abscissa not strictly monotone");
    }
}

} // namespace dsqed
