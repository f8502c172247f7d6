#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "jury/experiments.hpp"

namespace jury::cli {

/// `<x_label>,accuracy_mean,accuracy_stderr,iterations`, LF line endings,
/// floats in shortest round-trip form.
void write_csv(std::ostream& out, const ResultTable& table);
std::string to_csv(const ResultTable& table);

/// FNV-1a 64-bit digest, hex encoded. Identifies a result file in its
/// manifest.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace jury::cli
