#include "divscope/report.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "divscope/error.hpp"

namespace divscope {

nlohmann::json report_to_json(const DiversityReport& report) {
  return {{"corpus_id", report.corpus_id},
          {"metric", metric_name(report.metric)},
          {"score", report.score},
          {"config", report.config},
          {"counts", report.counts}};
}

DiversityReport report_from_json(const nlohmann::json& j) {
  DiversityReport r;
  try {
    r.corpus_id = j.at("corpus_id").get<std::string>();
    r.metric = parse_metric(j.at("metric").get<std::string>());
    r.score = j.at("score").get<double>();
    r.config = j.value("config", nlohmann::json::object());
    r.counts = j.value("counts", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid report: ") + e.what());
  }
  if (!(r.score >= 0.0 && r.score <= 100.0)) throw Error("invalid report: score outside [0, 100]");
  return r;
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_report(const std::filesystem::path& path, const DiversityReport& report) {
  write_text_file(path, dump_json(report_to_json(report)));
}

DiversityReport read_report(const std::filesystem::path& path) {
  try {
    return report_from_json(nlohmann::json::parse(read_text_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(path.string(), 0, std::string("malformed JSON: ") + e.what());
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back().push_back(c);
    }
  }
  return fields;
}

std::string report_csv(const DiversityReport& report) {
  return "corpus_id,metric,score\n" + csv_field(report.corpus_id) + "," +
         std::string(metric_name(report.metric)) + "," + format_double(report.score) + "\n";
}

}  // namespace divscope
