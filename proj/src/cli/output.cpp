#include "sinklab/cli/output.hpp"

#include "sinklab/cli/config.hpp"
#include "sinklab/errors.hpp"

namespace sinklab::cli {

std::string csv_escape(const std::string& text)
{
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : out_(path, std::ios::binary), columns_(header.size())
{
    if (!out_) throw ValidationError("--out", "cannot write " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << csv_escape(header[i]);
    out_ << "\n";
}

void CsvWriter::row(const std::vector<CsvCell>& cells)
{
    if (cells.size() != columns_) throw std::logic_error("CSV row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ",";
        if (const double* d = std::get_if<double>(&cells[i])) out_ << format_double(*d);
        else out_ << csv_escape(std::get<std::string>(cells[i]));
    }
    out_ << "\n";
    ++rows_;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("--out", "cannot write " + path.string());
    out << doc.dump(2) << "\n";
}

} // namespace sinklab::cli
