#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace pbdr::cli {

enum ExitCode : int { kSuccess = 0, kFatal = 1, kPartial = 2 };

struct RunConfig {
  std::string dataset;
  std::string schema = "iris";        // iris | wdbc | path to a JSON schema file
  std::vector<std::string> features;  // WDBC column subset, empty = all ten
  double tolerance = 1e-9;
  bool normalize = false;
  std::string axes = "consistent";  // 2-D: consistent (x = degree-1, y = constant) | prose
  std::string mapping = "const,deg1,deg2";  // 3-D coefficient -> (x, y, z)
  std::size_t epochs = 100;
  std::string out = "out";
  std::size_t threads = 1;
};

/// Entry point shared by the executable and the tests. argv[0] is ignored.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pbdr::cli
