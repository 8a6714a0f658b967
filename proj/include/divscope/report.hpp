#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "divscope/types.hpp"

namespace divscope {

nlohmann::json report_to_json(const DiversityReport& report);
DiversityReport report_from_json(const nlohmann::json& j);

/// Canonical JSON text: 2-space indent, sorted keys, trailing newline.
std::string dump_json(const nlohmann::json& j);

void write_report(const std::filesystem::path& path, const DiversityReport& report);
DiversityReport read_report(const std::filesystem::path& path);

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

/// Splits one CSV line, honouring double-quoted fields.
std::vector<std::string> parse_csv_line(const std::string& line);

/// "corpus_id,metric,score" header plus one row.
std::string report_csv(const DiversityReport& report);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace divscope
