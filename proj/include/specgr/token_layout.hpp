#pragma once

#include <Eigen/Core>

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace specgr {

using Token = std::uint32_t;
using ItemIndex = std::uint32_t;

// Row-major float matrix used for embeddings, centroids and draft vectors.
using Matrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr std::size_t kMaxDigits = 7;
inline constexpr std::size_t kMaxLevelCodes = 256;

// Digit codes of one item, or of a prefix of one. Each digit is a level-local
// code (0 .. level size - 1); TokenLayout maps it to a global token.
class SemanticId {
 public:
  SemanticId() = default;
  SemanticId(std::initializer_list<std::uint16_t> digits);
  explicit SemanticId(std::span<const std::uint16_t> digits);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::uint16_t operator[](std::size_t i) const { return digits_[i]; }
  std::span<const std::uint16_t> digits() const { return {digits_.data(), size_}; }

  void push_back(std::uint16_t code);
  SemanticId prefix(std::size_t length) const;
  bool starts_with(const SemanticId& prefix) const;

  // Packs length and digits into one integer. Keys of equal length order the
  // same way as the digit strings do lexicographically.
  std::uint64_t key() const;
  static SemanticId from_key(std::uint64_t key);

  std::string to_string() const;

  friend bool operator==(const SemanticId& a, const SemanticId& b) {
    return a.size_ == b.size_ && a.digits_ == b.digits_;
  }
  friend std::strong_ordering operator<=>(const SemanticId& a, const SemanticId& b);

 private:
  std::array<std::uint16_t, kMaxDigits> digits_{};
  std::size_t size_ = 0;
};

// Global token numbering. Specials occupy [0, 2); digit level i (0-based)
// occupies [2 + i * codebook_size, 2 + i * codebook_size + level_size(i)).
// The last level holds the identification counter and has id_vocab codes.
struct TokenLayout {
  static constexpr Token kBos = 0;
  static constexpr Token kEos = 1;
  static constexpr Token kNumSpecials = 2;

  std::size_t digits = 4;
  std::size_t codebook_size = 32;
  std::size_t id_vocab = 32;

  void validate() const;

  std::size_t semantic_levels() const { return digits - 1; }
  std::size_t level_size(std::size_t level) const {
    return level + 1 == digits ? id_vocab : codebook_size;
  }
  Token level_offset(std::size_t level) const {
    return kNumSpecials + static_cast<Token>(level * codebook_size);
  }
  Token token(std::size_t level, std::uint16_t code) const {
    return level_offset(level) + code;
  }
  std::size_t vocab_size() const {
    return kNumSpecials + semantic_levels() * codebook_size + id_vocab;
  }
  static bool is_special(Token t) { return t < kNumSpecials; }
  // Level of a digit token; nullopt for specials and out-of-range tokens.
  std::optional<std::size_t> level_of(Token t) const;
  bool code_in_level(std::size_t level, std::uint16_t code) const {
    return level < digits && code < level_size(level);
  }

  // Appends the global tokens for the digits of `id`.
  void append_tokens(const SemanticId& id, std::vector<Token>& out) const;

  friend bool operator==(const TokenLayout&, const TokenLayout&) = default;
};

}  // namespace specgr
