#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fracfast {

/// Identity of a cached reference solution. Two headers must agree exactly
/// for a cached field to be reused.
struct RefHeader {
  std::string problem;
  std::string scheme;
  double alpha = 0.0;
  double h = 0.0;
  double dx = 0.0;
  double a = 0.0, b = 0.0;
  long long cells = 0;
  long long steps = 0;
};

/// Deterministic cache filename for a header.
std::string reference_filename(const RefHeader& header);

/// Binary little-endian layout: magic, version, header, field payload and a
/// trailing FNV-1a checksum over the payload bytes.
void write_reference(const std::filesystem::path& path, const RefHeader& header,
                     std::span<const double> field);

/// Returns the cached field when the file exists, the header matches and the
/// checksum verifies; std::nullopt otherwise.
std::optional<std::vector<double>> read_reference(const std::filesystem::path& path,
                                                  const RefHeader& expected);

}  // namespace fracfast
