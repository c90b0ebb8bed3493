#include "biphoton/io_util.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "biphoton/errors.hpp"

namespace biphoton {

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write " + tmp.string());
        out << content;
        if (!out) throw ConfigError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::vector<std::pair<double, double>> read_two_column_csv(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open CSV file " + path.string());
    std::vector<std::pair<double, double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double a, b;
        if (!(fields >> a >> b)) {
            if (line_no == 1) continue;  // header row
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected two numeric columns");
        }
        rows.emplace_back(a, b);
    }
    if (rows.empty()) throw ParseError(path.string() + ": no data rows");
    return rows;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) body_ += ',';
        body_ += header[i];
    }
    body_ += '\n';
}

void CsvWriter::add_row(const std::vector<double>& values) {
    if (values.size() != columns_)
        throw ValidationError("csv: row width differs from header");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) body_ += ',';
        body_ += format_double(values[i]);
    }
    body_ += '\n';
}

std::string CsvWriter::str() const { return body_; }

}  // namespace biphoton
