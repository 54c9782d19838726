#pragma once

// Shared plumbing: error types, canonical byte encoding + FNV-1a digests,
// round-trip double formatting, atomic file writes and a chunked parallel_for.

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace quso {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text (case files, CSVs).
struct ParseError : Error {
  using Error::Error;
};

// Structurally valid input that violates a model invariant.
struct ValidationError : Error {
  using Error::Error;
};

// Reduced system not solvable (disconnected grid).
struct SingularSystemError : Error {
  using Error::Error;
};

// Request exceeds a configured resource limit.
struct CapacityError : Error {
  using Error::Error;
};

// Broken or truncated binary container.
struct FormatError : Error {
  using Error::Error;
};

// Cached artifact does not match the inputs that should have produced it.
struct StaleCacheError : Error {
  using Error::Error;
};

// Argument outside a function's documented domain.
struct DomainError : Error {
  using Error::Error;
};

// --- canonical byte encoding -------------------------------------------------

// Little-endian, fixed-width encoding used for content digests and the cost
// table container. Doubles are encoded by IEEE-754 bit pattern, so encoding
// is lossless and platform independent.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }

  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }

  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }

  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }

  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }

  void bytes(std::string_view s) { buf_.append(s); }

  const std::string& data() const { return buf_; }

 private:
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }

  std::uint32_t u32() {
    auto s = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(s[i])) << (8 * i);
    return v;
  }

  std::uint64_t u64() {
    auto s = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[i])) << (8 * i);
    return v;
  }

  double f64() { return std::bit_cast<double>(u64()); }

  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::string_view take(std::size_t n) {
    if (pos_ + n > data_.size()) throw FormatError("truncated input: expected " + std::to_string(n) + " more bytes");
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

// --- FNV-1a 64-bit -----------------------------------------------------------

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ull) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// --- float formatting --------------------------------------------------------

// Shortest decimal string that parses back to exactly the same double.
inline std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// --- files -------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// --- parallel_for ------------------------------------------------------------

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Splits [begin, end) into one contiguous chunk per worker. Chunk boundaries
// are multiples of `align`, so disjoint-pair kernels stay disjoint. Results
// must not depend on the partition: callers only perform independent writes.
void parallel_for(std::size_t begin, std::size_t end, int threads, std::size_t align,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace quso
