#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace qst {

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double x);

/// Provenance lines ("key=value") echoed as '#' comments ahead of the CSV
/// header so any output can be reproduced from its own file.
void write_csv_header(std::ostream& os,
                      std::span<const std::pair<std::string, std::string>>
                          provenance,
                      const std::string& columns);

}  // namespace qst
