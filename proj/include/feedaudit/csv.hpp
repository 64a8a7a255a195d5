#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "feedaudit/core.hpp"

namespace feedaudit {

inline constexpr const char* kToolVersion = "0.1.0";

// Pinned "%.10g" float formatting so identical analyses produce identical
// bytes regardless of locale or stream state.
std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::string& table_name,
              const std::vector<std::string>& columns);

    void row(const std::vector<std::string>& fields);

    static std::string field(const std::string& s);
    static std::string field(double v) { return format_double(v); }
    static std::string field(std::int64_t v) { return std::to_string(v); }

private:
    std::ofstream out_;
    std::size_t n_columns_;
};

}  // namespace feedaudit
