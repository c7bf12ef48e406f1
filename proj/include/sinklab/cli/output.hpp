#pragma once

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace sinklab::cli {

using CsvCell = std::variant<double, std::string>;

// Fixed-column CSV; doubles are written with 17 significant digits.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

    void row(const std::vector<CsvCell>& cells);
    std::size_t rows() const noexcept { return rows_; }

private:
    std::ofstream out_;
    std::size_t columns_;
    std::size_t rows_ = 0;
};

std::string csv_escape(const std::string& text);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

} // namespace sinklab::cli
