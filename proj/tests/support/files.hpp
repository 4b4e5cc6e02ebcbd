#pragma once

#include <string>

namespace rvnli::testkit {

// Absolute path of a file in the source tree.
std::string source_path(const std::string& relative);
std::string read_file(const std::string& path);
// Fresh empty directory under the system temp dir.
std::string temp_dir(const std::string& prefix);

}  // namespace rvnli::testkit
