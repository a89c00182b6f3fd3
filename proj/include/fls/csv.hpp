#ifndef FLS_CSV_HPP
#define FLS_CSV_HPP

#include <string>

namespace fls {

/// Version string carried in every output header line.
inline constexpr const char *kVersion = "fls-harness 1.0.0";

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double x);

} // namespace fls

#endif
