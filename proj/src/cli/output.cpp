#include "liouspec/cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <system_error>

#include "liouspec/cli/config.hpp"

namespace liouspec::cli {

using Json = nlohmann::ordered_json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  row_ = std::move(header);
  end_row();
}

CsvWriter& CsvWriter::cell(double x) { return cell(format_double(x)); }

CsvWriter& CsvWriter::cell(const std::string& s) {
  row_.push_back(s);
  return *this;
}

CsvWriter& CsvWriter::cell(long long n) { return cell(std::to_string(n)); }

CsvWriter& CsvWriter::cell(bool b) { return cell(std::string(b ? "1" : "0")); }

void CsvWriter::end_row() {
  if (row_.size() != columns_) {
    throw Error("csv " + path_.string() + ": row has " + std::to_string(row_.size()) +
                " cells, header has " + std::to_string(columns_));
  }
  for (std::size_t k = 0; k < row_.size(); ++k) {
    if (k > 0) out_ << ',';
    out_ << row_[k];
  }
  out_ << '\n';
  row_.clear();
  if (!out_) throw IoError("write failed on " + path_.string());
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw IoError("closing " + path_.string() + " failed");
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory " + dir.string() +
                  (ec ? ": " + ec.message() : std::string()));
  }
}

void write_json(const std::filesystem::path& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  out.close();
  if (!out) throw IoError("write failed on " + path.string());
}

Json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

Json to_json(const ModelParams& p) {
  return {{"j", p.j.value()}, {"h", p.h}, {"gamma", p.gamma}, {"gamma0", p.gamma0}, {"p", p.p}};
}

Json to_json(const LineShapeParams& q, LineModel model) {
  Json out = {{"a", json_number(q.a)},
              {"omega0", json_number(q.omega0)},
              {"gamma", json_number(q.gamma)},
              {"c", json_number(q.c)}};
  if (model == LineModel::B) out["b"] = json_number(q.b);
  return out;
}

Json to_json(const FitResult& f) {
  return {{"model", std::string(to_string(f.model))},
          {"params", to_json(f.params, f.model)},
          {"rss", json_number(f.rss)},
          {"n_points", f.n_points},
          {"n_params", f.n_params},
          {"converged", f.converged},
          {"iterations", f.n_iterations},
          {"perfect", f.perfect},
          {"window", {{"lo", json_number(f.window.lo)}, {"hi", json_number(f.window.hi)}}},
          {"bic", json_number(bic(f))},
          {"aic", json_number(aic(f))}};
}

std::string point_tag(SpinLength j, double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "j%g_p%g", j.value(), p);
  return buf;
}

}  // namespace liouspec::cli
