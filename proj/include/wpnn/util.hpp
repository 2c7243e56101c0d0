#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>

namespace wpnn {

/// FNV-1a 64-bit hash, used for content-addressed sweep cells and cavity files.
inline uint64_t fnv1a64(const void* data, size_t n, uint64_t h = 0xCBF29CE484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline uint64_t fnv1a64(const std::string& s, uint64_t h = 0xCBF29CE484222325ULL) {
  return fnv1a64(s.data(), s.size(), h);
}

/// Round a double to 15 significant decimal digits. Interchange files are
/// quantized at this level so re-emitting a loaded file is byte-stable.
inline double quantize15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return std::strtod(buf, nullptr);
}

inline std::string hex64(uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::string& path);

/// Write via a temporary file and rename, so interrupted sweeps never leave
/// half-written artifacts behind.
void write_file_atomic(const std::string& path, const std::string& content);

bool file_exists(const std::string& path);

void make_dirs(const std::string& path);

}  // namespace wpnn
