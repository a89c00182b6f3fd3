#ifndef FLS_ERRORS_HPP
#define FLS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fls {

/// Invalid experiment configuration; the message names the violated
/// constraint.
class ConfigError : public std::invalid_argument {
public:
  explicit ConfigError(const std::string &what) : std::invalid_argument(what) {}
};

} // namespace fls

#endif
