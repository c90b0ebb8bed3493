#ifndef BIPHOTON_IO_UTIL_HPP
#define BIPHOTON_IO_UTIL_HPP

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace biphoton {

// 17 significant digits: enough to round-trip any double, and byte-stable
// across runs.
std::string format_double(double value);

// Writes via a temp file in the same directory plus an atomic rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Two-column CSV (position, value); '#' lines and a non-numeric header row are
// skipped.
std::vector<std::pair<double, double>> read_two_column_csv(
    const std::filesystem::path& path);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(const std::vector<double>& values);
    std::string str() const;

private:
    std::string body_;
    std::size_t columns_;
};

}  // namespace biphoton

#endif
