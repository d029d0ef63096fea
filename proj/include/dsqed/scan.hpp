#pragma once

#include <string>
#include <utility>
#include <vector>

namespace dsqed {

struct Grid {
    double start = 0.0;
    double stop = 0.0;
    int count = 0;

    std::vector<double> points() const;
    double step() const { return count > 1 ? (stop - start) / (count - 1) : 0.0; }
    bool operator==(const Grid&) const = default;
};

// One abscissa plus any number of named observable columns, all the same
// length, with enough metadata to re-run the computation.
struct ScanResult {
    std::string abscissa_name;
    std::vector<double> abscissa;
    std::vector<std::string> column_names;
    std::vector<std::vector<double>> columns;
    std::vector<std::pair<std::string, std::string>> metadata;

    void add_column(const std::string& name, std::vector<double> values);
    void add_metadata(const std::string& key, const std::string& value);
    const std::vector<double>& column(const std::string& name) const;
    void validate() const;  // lengths match, abscissa strictly monotone
};

} // namespace dsqed
