#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dcqw/config.hpp"

namespace dcqw {

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
};

using MetaValue = std::variant<double, long, std::string>;

// Output of one command: scalar metadata plus named tables. Column names are
// part of the file format and must not change.
struct Report {
  std::string command;
  std::vector<std::pair<std::string, MetaValue>> meta;
  std::vector<Table> tables;
  std::vector<std::string> warnings;  // printed, never written

  const Table& table(const std::string& name) const;
  const MetaValue& meta_value(const std::string& key) const;
  double meta_number(const std::string& key) const;
};

std::string csv_field(const std::string& s);
std::string to_csv(const Table& t);
std::string meta_csv(const Report& r);
std::string to_json(const Report& r, const RunConfig& cfg);

// CSV: the first table goes to `path`, table k to <stem>_<name>.csv, the
// metadata to <stem>_meta.csv. JSON: one document. Empty path writes to
// stdout. Returns the files written.
std::vector<std::string> write_report(const Report& r, const RunConfig& cfg);

}  // namespace dcqw
