#include "fls/csv.hpp"

#include <array>
#include <charconv>
#include <stdexcept>

namespace fls {

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc())
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

} // namespace fls
