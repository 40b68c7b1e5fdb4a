#include "tailproc/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tailproc/errors.hpp"

namespace tailproc {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw invalid_parameter("cannot open for writing: " + tmp.string());
    out << content;
    if (!out) throw invalid_parameter("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_parameter("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string path_to_csv(const PathMatrix& path) {
  std::ostringstream out;
  out << "t";
  for (int j = 1; j <= path.d; ++j) out << ",x" << j;
  out << "\n";
  for (std::size_t t = 0; t < path.n; ++t) {
    out << (t + 1);
    const auto row = path.row(t);
    for (double v : row) out << "," << format_double(v);
    out << "\n";
  }
  return out.str();
}

std::string path_metadata(const PathMatrix& path, double alpha) {
  std::ostringstream out;
  out << "model=" << path.model_id << "\n";
  out << "seed_master=" << path.seed_master << "\n";
  out << "seed_stream=" << path.seed_stream << "\n";
  out << "n=" << path.n << "\n";
  out << "d=" << path.d << "\n";
  out << "alpha=" << format_double(alpha) << "\n";
  return out.str();
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw invalid_parameter("cannot create directory: " + dir);
}

}  // namespace tailproc
