#ifndef LIOUSPEC_CLI_OUTPUT_HPP_
#define LIOUSPEC_CLI_OUTPUT_HPP_

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "liouspec/lineshape.hpp"
#include "liouspec/spectral.hpp"

namespace liouspec::cli {

// %.17g, with nan / inf / -inf spelled out.
std::string format_double(double x);

// Comma-separated table with a fixed header. Cells are written verbatim, so
// callers format numbers with format_double. Throws IoError.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

  CsvWriter& cell(double x);
  CsvWriter& cell(const std::string& s);
  CsvWriter& cell(long long n);
  CsvWriter& cell(bool b);
  void end_row();
  void close();

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
  std::vector<std::string> row_;
};

void ensure_directory(const std::filesystem::path& dir);
void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& doc);

// Non-finite doubles become the strings "nan", "inf", "-inf".
nlohmann::ordered_json json_number(double x);

nlohmann::ordered_json to_json(const ModelParams& p);
nlohmann::ordered_json to_json(const LineShapeParams& q, LineModel model);
nlohmann::ordered_json to_json(const FitResult& f);

// "j20_p0.9": compact tag used in file names.
std::string point_tag(SpinLength j, double p);

}  // namespace liouspec::cli

#endif  // LIOUSPEC_CLI_OUTPUT_HPP_
