#pragma once

#include <map>
#include <string>

#include "gla/core/matrix.hpp"

namespace gla::core {

// Shared matrix file format: first line "rows cols", then one row per line,
// whitespace-separated decimal values. Values are written with 17
// significant digits so every double round-trips exactly.

void write_matrix(const std::string& path, const Matrix& m);
Matrix read_matrix(const std::string& path);

void write_vector(const std::string& path, const Vector& v);  // stored as n x 1
Vector read_vector(const std::string& path);

std::string format_double(double v);

// Plain-text manifests: one "key = value" pair per line, '#' comments.
using Manifest = std::map<std::string, std::string>;
void write_manifest(const std::string& path, const Manifest& entries);
Manifest read_manifest(const std::string& path);

void ensure_directory(const std::string& path);

}  // namespace gla::core
