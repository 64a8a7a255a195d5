#include "feedaudit/csv.hpp"

#include <cstdio>

namespace feedaudit {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string CsvWriter::field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& table_name,
                     const std::vector<std::string>& columns)
    : out_(path), n_columns_(columns.size()) {
    if (!out_) throw DataError("cannot open for writing: " + path.string());
    out_ << "# feedaudit " << kToolVersion << " table=" << table_name << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << (i ? "," : "") << field(columns[i]);
    out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& fields) {
    if (fields.size() != n_columns_)
        throw DataError("csv row has " + std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(n_columns_));
    for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << field(fields[i]);
    out_ << '\n';
}

}  // namespace feedaudit
