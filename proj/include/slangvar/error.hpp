#ifndef SLANGVAR_ERROR_HPP
#define SLANGVAR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace slangvar {

// Bad flags, bad config values, missing resource files. CLI maps this to exit 1.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent data content. CLI maps this to exit 2.
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A sense the requested model cannot score (e.g. no usage context).
// The evaluation harness excludes such senses and reports the count.
class inapplicable_error : public std::runtime_error {
 public:
  explicit inapplicable_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace slangvar

#endif
