#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace biaslens {

// All data-level failures surface as Error with a module name and a stable
// machine-readable code; the CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    Error(std::string module, std::string code, const std::string& message)
        : std::runtime_error(module + "/" + code + ": " + message),
          module_(std::move(module)),
          code_(std::move(code)) {}

    const std::string& module() const { return module_; }
    const std::string& code() const { return code_; }

private:
    std::string module_;
    std::string code_;
};

}  // namespace biaslens
