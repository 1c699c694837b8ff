#include "fracfast/refcache.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace fracfast {

namespace {

constexpr std::uint32_t kMagic = 0x46524346;  // "FRCF"
constexpr std::uint32_t kVersion = 1;

std::uint64_t fnv1a(const unsigned char* data, std::size_t size) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= data[i];
    hash *= 1099511628211ULL;
  }
  return hash;
}

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(os, bits);
}

void put_string(std::ostream& os, const std::string& s) {
  put_u32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

bool get_u32(std::istream& is, std::uint32_t& v) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) return false;
  v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return true;
}

bool get_u64(std::istream& is, std::uint64_t& v) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) return false;
  v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return true;
}

bool get_f64(std::istream& is, double& v) {
  std::uint64_t bits;
  if (!get_u64(is, bits)) return false;
  std::memcpy(&v, &bits, 8);
  return true;
}

bool get_string(std::istream& is, std::string& s) {
  std::uint32_t size = 0;
  if (!get_u32(is, size) || size > (1u << 20)) return false;
  s.resize(size);
  return static_cast<bool>(is.read(s.data(), size));
}

}  // namespace

std::string reference_filename(const RefHeader& header) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s_%s_a%.6g_h%.10g_n%lld.ref",
                header.problem.c_str(), header.scheme.c_str(), header.alpha,
                header.h, header.cells);
  return buf;
}

void write_reference(const std::filesystem::path& path, const RefHeader& header,
                     std::span<const double> field) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("write_reference: cannot open " + path.string());
  put_u32(os, kMagic);
  put_u32(os, kVersion);
  put_string(os, header.problem);
  put_string(os, header.scheme);
  put_f64(os, header.alpha);
  put_f64(os, header.h);
  put_f64(os, header.dx);
  put_f64(os, header.a);
  put_f64(os, header.b);
  put_u64(os, static_cast<std::uint64_t>(header.cells));
  put_u64(os, static_cast<std::uint64_t>(header.steps));
  put_u64(os, field.size());
  os.write(reinterpret_cast<const char*>(field.data()),
           static_cast<std::streamsize>(field.size() * sizeof(double)));
  put_u64(os, fnv1a(reinterpret_cast<const unsigned char*>(field.data()),
                    field.size() * sizeof(double)));
  if (!os) throw std::runtime_error("write_reference: short write");
}

std::optional<std::vector<double>> read_reference(const std::filesystem::path& path,
                                                  const RefHeader& expected) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  std::uint32_t magic = 0, version = 0;
  RefHeader header;
  std::uint64_t cells = 0, steps = 0, count = 0;
  if (!get_u32(is, magic) || magic != kMagic) return std::nullopt;
  if (!get_u32(is, version) || version != kVersion) return std::nullopt;
  if (!get_string(is, header.problem) || !get_string(is, header.scheme)) {
    return std::nullopt;
  }
  if (!get_f64(is, header.alpha) || !get_f64(is, header.h) ||
      !get_f64(is, header.dx) || !get_f64(is, header.a) || !get_f64(is, header.b) ||
      !get_u64(is, cells) || !get_u64(is, steps) || !get_u64(is, count)) {
    return std::nullopt;
  }
  header.cells = static_cast<long long>(cells);
  header.steps = static_cast<long long>(steps);
  if (header.problem != expected.problem || header.scheme != expected.scheme ||
      header.alpha != expected.alpha || header.h != expected.h ||
      header.dx != expected.dx || header.a != expected.a || header.b != expected.b ||
      header.cells != expected.cells || header.steps != expected.steps) {
    return std::nullopt;
  }
  if (count > (1ull << 32)) return std::nullopt;
  std::vector<double> field(count);
  if (!is.read(reinterpret_cast<char*>(field.data()),
               static_cast<std::streamsize>(count * sizeof(double)))) {
    return std::nullopt;
  }
  std::uint64_t checksum = 0;
  if (!get_u64(is, checksum) ||
      checksum != fnv1a(reinterpret_cast<const unsigned char*>(field.data()),
                        count * sizeof(double))) {
    return std::nullopt;
  }
  return field;
}

}  // namespace fracfast
