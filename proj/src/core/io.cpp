#include "gla/core/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace gla::core {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_matrix(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << m.rows << ' ' << m.cols << '\n';
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (j) out << ' ';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

Matrix read_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::size_t rows = 0, cols = 0;
    if (!(in >> rows >> cols)) throw std::runtime_error("bad matrix header in " + path);
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows * cols; ++i) {
        if (!(in >> m.data[i]))
            throw std::runtime_error("truncated matrix data in " + path);
    }
    return m;
}

void write_vector(const std::string& path, const Vector& v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    write_matrix(path, m);
}

Vector read_vector(const std::string& path) {
    Matrix m = read_matrix(path);
    if (m.cols != 1) throw std::runtime_error("expected single-column file: " + path);
    return m.data;
}

void write_manifest(const std::string& path, const Manifest& entries) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& [key, value] : entries) out << key << " = " << value << '\n';
}

namespace {
std::string strip(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}
}  // namespace

Manifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    Manifest m;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (strip(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("malformed line in " + path + ": " + line);
        m[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
    }
    return m;
}

void ensure_directory(const std::string& path) {
    std::filesystem::create_directories(path);
}

}  // namespace gla::core
