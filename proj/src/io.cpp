#include "qst/io.hpp"

#include <charconv>
#include <stdexcept>

namespace qst {

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  if (res.ec != std::errc{})
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

void write_csv_header(std::ostream& os,
                      std::span<const std::pair<std::string, std::string>>
                          provenance,
                      const std::string& columns) {
  for (const auto& [key, value] : provenance)
    os << "# " << key << "=" << value << "\n";
  os << columns << "\n";
}

}  // namespace qst
