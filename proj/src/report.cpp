#include "mvlab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mvlab {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct LongRow {
  std::string source, series;
  double x, y;
};

bool read_file(const std::string& path, std::string* out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  *out = ss.str();
  return true;
}

/// Numeric leaves of a JSON object become series; arrays of objects with an
/// identity_id (verification suites) get one row per entry.
void rows_from_json(const std::string& source, const json& j, std::vector<LongRow>* rows) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const json& v = it.value();
      if (v.is_number()) {
        rows->push_back({source, it.key(), 0.0, v.get<double>()});
      } else if (v.is_object()) {
        for (auto jt = v.begin(); jt != v.end(); ++jt) {
          if (jt.value().is_number()) {
            rows->push_back({source, it.key() + "." + jt.key(), 0.0,
                             jt.value().get<double>()});
          }
        }
      } else if (v.is_array()) {
        double idx = 0.0;
        for (const json& e : v) {
          if (e.is_object() && e.contains("identity_id")) {
            std::string id = e["identity_id"].get<std::string>();
            if (e.contains("max_rel_residual") && e["max_rel_residual"].is_number()) {
              rows->push_back({source, id + ".max_rel_residual", idx,
                               e["max_rel_residual"].get<double>()});
            }
            if (e.contains("mean_rel_residual") && e["mean_rel_residual"].is_number()) {
              rows->push_back({source, id + ".mean_rel_residual", idx,
                               e["mean_rel_residual"].get<double>()});
            }
          }
          idx += 1.0;
        }
      }
    }
  }
}

/// CSV traces: first column is the x value, every other numeric column a
/// series named by the header.
void rows_from_csv(const std::string& source, const std::string& text,
                   std::vector<LongRow>* rows) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) return;
  std::vector<std::string> cols;
  {
    std::istringstream hs(line);
    std::string c;
    while (std::getline(hs, c, ',')) cols.push_back(c);
  }
  if (cols.size() < 2) return;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string c;
    std::vector<double> vals;
    bool ok = true;
    while (std::getline(ls, c, ',')) {
      try {
        vals.push_back(std::stod(c));
      } catch (...) {
        ok = false;
        break;
      }
    }
    if (!ok || vals.size() != cols.size()) continue;
    for (std::size_t i = 1; i < cols.size(); ++i) {
      rows->push_back({source, cols[i], vals[0], vals[i]});
    }
  }
}

}  // namespace

std::string tool_version() { return "0.1.0"; }

MergeResult merge_reports(const std::vector<std::string>& paths) {
  MergeResult out;
  std::vector<std::string> files;
  for (const std::string& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<std::string> found;
      for (const auto& e : fs::directory_iterator(p, ec)) {
        if (!e.is_regular_file()) continue;
        std::string ext = e.path().extension().string();
        if (ext == ".json" || ext == ".csv") found.push_back(e.path().string());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(p, ec)) {
      files.push_back(p);
    } else {
      out.missing.push_back(p);
    }
  }

  json sections = json::array();
  std::vector<LongRow> rows;
  for (const std::string& f : files) {
    std::string text;
    if (!read_file(f, &text)) {
      out.missing.push_back(f);
      continue;
    }
    json section;
    section["source"] = f;
    if (f.size() >= 4 && f.compare(f.size() - 4, 4, ".csv") == 0) {
      section["kind"] = "csv";
      section["content"] = text;
      rows_from_csv(f, text, &rows);
    } else {
      json parsed;
      try {
        parsed = json::parse(text);
      } catch (const json::exception&) {
        out.missing.push_back(f);
        continue;
      }
      section["kind"] = "json";
      section["content"] = parsed;
      rows_from_json(f, parsed, &rows);
    }
    sections.push_back(section);
    ++out.files_merged;
  }

  json summary;
  summary["tool_version"] = tool_version();
  summary["inputs"] = files;
  summary["missing"] = out.missing;
  summary["sections"] = sections;
  out.summary_json = summary.dump(2);

  std::string csv = "source,series,x,y\n";
  for (const LongRow& r : rows) {
    csv += csv_quote(r.source) + "," + csv_quote(r.series) + "," + num17(r.x) +
           "," + num17(r.y) + "\n";
  }
  out.long_csv = csv;
  return out;
}

}  // namespace mvlab
