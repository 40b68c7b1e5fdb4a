#pragma once

#include <string>

#include "tailproc/models.hpp"

namespace tailproc {

// Shortest representation with 17 significant digits (round-trips doubles).
std::string format_double(double x);

// Write via temp file + rename in the target directory.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// PathMatrix CSV: header "t,x1,...,xd", one row per time step.
std::string path_to_csv(const PathMatrix& path);
// key=value sidecar (model, seed, n, d, alpha).
std::string path_metadata(const PathMatrix& path, double alpha);

void ensure_directory(const std::string& dir);

}  // namespace tailproc
