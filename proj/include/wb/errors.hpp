#pragma once

#include <stdexcept>
#include <string>

namespace wb {

// Error categories; the CLI maps each category to a distinct exit code.
enum class Errc {
    generic = 1,
    invalid_config = 2,
    missing_file = 3,
    schema = 4,
    numeric = 5,
};

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

}  // namespace wb
