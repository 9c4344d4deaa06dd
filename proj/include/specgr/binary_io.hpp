#pragma once

// Little-endian helpers shared by the binary artifact formats. Every format
// starts with an 8-byte magic, a u64 byte length and a JSON preamble.

#include "specgr/errors.hpp"

#include <json.hpp>
#include <fmt/format.h>

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>

namespace specgr::io {

static_assert(std::endian::native == std::endian::little,
              "artifact formats assume a little-endian host");

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  static_assert(std::is_trivially_copyable_v<T>);
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  static_assert(std::is_trivially_copyable_v<T>);
  T value{};
  const auto offset = static_cast<long long>(in.tellg());
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw FormatError(fmt::format("truncated input at byte offset {}", offset));
  return value;
}

template <typename T>
void write_array(std::ostream& out, const T* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(T)));
}

template <typename T>
void read_array(std::istream& in, T* data, std::size_t count) {
  const auto offset = static_cast<long long>(in.tellg());
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(T)));
  if (!in) throw FormatError(fmt::format("truncated input at byte offset {}", offset));
}

inline void write_preamble(std::ostream& out, std::string_view magic, const nlohmann::json& header) {
  if (magic.size() != 8) throw UsageError("magic must be 8 bytes");
  out.write(magic.data(), 8);
  const std::string text = header.dump();
  write_pod<std::uint64_t>(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

inline nlohmann::json read_preamble(std::istream& in, std::string_view magic) {
  char buf[8];
  in.read(buf, 8);
  if (!in || std::string_view(buf, 8) != magic) {
    throw FormatError(fmt::format("bad magic at byte offset 0, expected '{}'", magic));
  }
  const auto length = read_pod<std::uint64_t>(in);
  if (length > (1ull << 32)) throw FormatError("implausible header length at byte offset 8");
  std::string text(length, '\0');
  in.read(text.data(), static_cast<std::streamsize>(length));
  if (!in) throw FormatError("truncated header at byte offset 16");
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(fmt::format("header at byte offset 16 is not valid JSON: {}", e.what()));
  }
}

}  // namespace specgr::io
