#pragma once

#include <stdexcept>
#include <string>

namespace twm {

// All failures carry the module and operation that raised them, so sweep
// diagnostics can be traced back to a config key or input file.
class SimError : public std::runtime_error {
public:
  SimError(std::string module, std::string op, const std::string& what)
      : std::runtime_error(module + "/" + op + ": " + what),
        module_(std::move(module)), op_(std::move(op)) {}

  const std::string& module() const noexcept { return module_; }
  const std::string& op() const noexcept { return op_; }

private:
  std::string module_;
  std::string op_;
};

}  // namespace twm
