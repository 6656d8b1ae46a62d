#include "cslprobe/output.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cslprobe/errors.hpp"
#include "cslprobe/version.hpp"

namespace cslprobe {

std::string format_number(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

void Table::add(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw InvalidArgument("Table: row width mismatch");
    rows.push_back(std::move(row));
}

void Table::add(const std::vector<double>& row) {
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (double v : row) cells.push_back(format_number(v));
    add(std::move(cells));
}

Table timeseries_table(const TimeSeries& series) {
    Table t;
    t.columns.push_back("t_s");
    for (const auto& n : series.names()) t.columns.push_back(n);
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::vector<double> row{series.times()[i]};
        for (std::size_t c = 0; c < series.names().size(); ++c) row.push_back(series.channel(c)[i]);
        t.add(row);
    }
    return t;
}

std::string render_csv(const FileHeader& header, const Table& table) {
    std::ostringstream os;
    os << "# cslprobe " << kVersion << "\n";
    os << "# command: " << header.command << "\n";
    os << "# units: " << header.units << "\n";
    os << "# config: " << header.config.dump() << "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        os << (i ? "," : "") << table.columns[i];
    }
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    return os.str();
}

std::string render_json(const FileHeader& header, const nlohmann::json& body) {
    nlohmann::json doc{{"command", header.command},
                       {"version", kVersion},
                       {"units", header.units},
                       {"config", header.config},
                       {"result", body}};
    return doc.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error("cannot create directory " + path.parent_path().string());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << content;
    if (!out) throw Error("write failed for " + path.string());
}

std::filesystem::path resolve_output_dir(const std::string& dir) {
    if (!dir.empty()) return dir;
    if (const char* env = std::getenv("CSLPROBE_OUT"); env && *env) return env;
    return ".";
}

}  // namespace cslprobe
