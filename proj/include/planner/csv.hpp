#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "planner/errors.hpp"

namespace planner {

// %.9g rendering used for every numeric CSV/report field.
std::string format_g9(double v);

// Comma-separated UTF-8 writer with a header row.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);

 private:
  std::ofstream out_;
};

// Minimal reader for the files this project writes (no quoting).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);

}  // namespace planner
