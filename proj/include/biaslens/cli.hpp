#pragma once

#include <string>
#include <vector>

namespace biaslens::cli {

// Exit codes: 0 success, 1 usage error, 2 data error.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace biaslens::cli
