#pragma once

// CSV and JSON writers. Every file starts with the producing command, the code
// version, the unit conventions and the resolved configuration, so a data file
// can be regenerated from its own header. Nothing time- or host-dependent is
// written, which keeps repeated runs byte-identical.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cslprobe/lindblad.hpp"

namespace cslprobe {

struct FileHeader {
    std::string command;
    nlohmann::json config;
    std::string units;
};

/// 12 significant digits, shortest of fixed/scientific.
std::string format_number(double v);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row);
    void add(const std::vector<double>& row);
};

Table timeseries_table(const TimeSeries& series);

std::string render_csv(const FileHeader& header, const Table& table);
/// {"command", "version", "units", "config", "result": body}, two-space indent.
std::string render_json(const FileHeader& header, const nlohmann::json& body);

/// Creates parent directories; throws Error on I/O failure.
void write_text(const std::filesystem::path& path, const std::string& content);

/// dir if non-empty, else $CSLPROBE_OUT, else ".".
std::filesystem::path resolve_output_dir(const std::string& dir);

}  // namespace cslprobe
