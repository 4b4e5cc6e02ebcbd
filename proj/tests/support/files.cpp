#include "files.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rvnli::testkit {

std::string source_path(const std::string& relative) { return std::string(RVNLI_SOURCE_DIR) + "/" + relative; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_dir(const std::string& prefix) {
  static std::mt19937_64 rng(std::random_device{}());
  auto base = std::filesystem::temp_directory_path();
  for (;;) {
    auto dir = base / (prefix + "-" + std::to_string(rng() % 1000000000));
    if (std::filesystem::create_directory(dir)) return dir.string();
  }
}

}  // namespace rvnli::testkit
