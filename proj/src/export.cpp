#include "dcqw/export.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "dcqw/errors.hpp"

namespace dcqw {

namespace {

std::string meta_text(const MetaValue& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  if (const auto* l = std::get_if<long>(&v)) return std::to_string(*l);
  return std::get<std::string>(v);
}

// JSON has no inf or nan.
std::string json_number(double x) { return std::isfinite(x) ? format_double(x) : "null"; }

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

void Table::add(std::vector<double> row) {
  if (row.size() != columns.size())
    throw std::logic_error("table " + name + ": row has " + std::to_string(row.size()) +
                           " entries, expected " + std::to_string(columns.size()));
  rows.push_back(std::move(row));
}

const Table& Report::table(const std::string& name) const {
  for (const auto& t : tables)
    if (t.name == name) return t;
  throw IndexError("no table '" + name + "'");
}

const MetaValue& Report::meta_value(const std::string& key) const {
  for (const auto& [k, v] : meta)
    if (k == key) return v;
  throw IndexError("no meta entry '" + key + "'");
}

double Report::meta_number(const std::string& key) const {
  const auto& v = meta_value(key);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  if (const auto* l = std::get_if<long>(&v)) return static_cast<double>(*l);
  throw IndexError("meta entry '" + key + "' is not a number");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t j = 0; j < t.columns.size(); ++j)
    out += (j ? "," : "") + csv_field(t.columns[j]);
  out += "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + format_double(row[j]);
    out += "\r\n";
  }
  return out;
}

std::string meta_csv(const Report& r) {
  std::string out = "key,value\r\n";
  out += "command," + csv_field(r.command) + "\r\n";
  for (const auto& [k, v] : r.meta) out += csv_field(k) + "," + csv_field(meta_text(v)) + "\r\n";
  return out;
}

std::string to_json(const Report& r, const RunConfig& cfg) {
  std::string out = "{\n  \"command\": " + json_string(r.command) + ",\n  \"meta\": {";
  for (std::size_t i = 0; i < r.meta.size(); ++i) {
    const auto& [k, v] = r.meta[i];
    out += (i ? ",\n    " : "\n    ") + json_string(k) + ": ";
    if (const auto* d = std::get_if<double>(&v)) out += json_number(*d);
    else if (const auto* l = std::get_if<long>(&v)) out += std::to_string(*l);
    else out += json_string(std::get<std::string>(v));
  }
  out += r.meta.empty() ? "},\n" : "\n  },\n";

  out += "  \"config\": {";
  bool first = true;
  for (const auto& key : config_keys()) {
    const auto v = get_config_value(cfg, key);
    if (!v) continue;
    out += (first ? "\n    " : ",\n    ") + json_string(key) + ": " + json_string(*v);
    first = false;
  }
  out += first ? "},\n" : "\n  },\n";

  out += "  \"tables\": {";
  for (std::size_t ti = 0; ti < r.tables.size(); ++ti) {
    const auto& t = r.tables[ti];
    out += (ti ? ",\n    " : "\n    ") + json_string(t.name) + ": {";
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
      out += (j ? ",\n      " : "\n      ") + json_string(t.columns[j]) + ": [";
      for (std::size_t i = 0; i < t.rows.size(); ++i)
        out += (i ? ", " : "") + json_number(t.rows[i][j]);
      out += "]";
    }
    out += "\n    }";
  }
  out += r.tables.empty() ? "}\n}\n" : "\n  }\n}\n";
  return out;
}

std::vector<std::string> write_report(const Report& r, const RunConfig& cfg) {
  if (cfg.format == "json") {
    const std::string text = to_json(r, cfg);
    if (cfg.out.empty()) {
      std::cout << text;
      return {};
    }
    write_file(cfg.out, text);
    return {cfg.out};
  }
  if (cfg.out.empty()) {
    for (std::size_t i = 0; i < r.tables.size(); ++i)
      std::cout << (i ? "\n" : "") << to_csv(r.tables[i]);
    return {};
  }
  namespace fs = std::filesystem;
  const fs::path p(cfg.out);
  const fs::path stem = p.parent_path() / p.stem();
  std::vector<std::string> written;
  for (std::size_t i = 0; i < r.tables.size(); ++i) {
    const std::string path =
        i == 0 ? cfg.out : stem.string() + "_" + r.tables[i].name + ".csv";
    write_file(path, to_csv(r.tables[i]));
    written.push_back(path);
  }
  const std::string meta_path = stem.string() + "_meta.csv";
  write_file(meta_path, meta_csv(r));
  written.push_back(meta_path);
  return written;
}

}  // namespace dcqw
