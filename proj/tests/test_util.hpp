// Small shared helpers for the test suite: unique temp paths and file I/O.
#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace testutil {

// Per-process scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("subic_tests_" + std::to_string(static_cast<long long>(::getpid())));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

inline std::string scratch_path(const std::string& name) {
  return (scratch_dir() / name).string();
}

inline void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace testutil
