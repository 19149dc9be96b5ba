#ifndef HSEG_ERROR_HPP
#define HSEG_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hseg {

// Data/validation failure. The CLI maps this to exit code 2.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hseg

#endif
