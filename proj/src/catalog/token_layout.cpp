#include "specgr/token_layout.hpp"

#include "specgr/errors.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>

namespace specgr {

SemanticId::SemanticId(std::initializer_list<std::uint16_t> digits)
    : SemanticId(std::span<const std::uint16_t>(digits.begin(), digits.size())) {}

SemanticId::SemanticId(std::span<const std::uint16_t> digits) {
  if (digits.size() > kMaxDigits) {
    throw UsageError(fmt::format("semantic id longer than {} digits", kMaxDigits));
  }
  std::copy(digits.begin(), digits.end(), digits_.begin());
  size_ = digits.size();
}

void SemanticId::push_back(std::uint16_t code) {
  if (size_ == kMaxDigits) {
    throw UsageError(fmt::format("semantic id longer than {} digits", kMaxDigits));
  }
  digits_[size_++] = code;
}

SemanticId SemanticId::prefix(std::size_t length) const {
  SemanticId out;
  out.size_ = std::min(length, size_);
  std::copy_n(digits_.begin(), out.size_, out.digits_.begin());
  return out;
}

bool SemanticId::starts_with(const SemanticId& p) const {
  if (p.size_ > size_) return false;
  return std::equal(p.digits_.begin(), p.digits_.begin() + p.size_, digits_.begin());
}

std::uint64_t SemanticId::key() const {
  std::uint64_t k = static_cast<std::uint64_t>(size_) << 56;
  for (std::size_t i = 0; i < size_; ++i) {
    k |= static_cast<std::uint64_t>(digits_[i] & 0xff) << (48 - 8 * i);
  }
  return k;
}

SemanticId SemanticId::from_key(std::uint64_t key) {
  SemanticId out;
  out.size_ = static_cast<std::size_t>(key >> 56);
  for (std::size_t i = 0; i < out.size_; ++i) {
    out.digits_[i] = static_cast<std::uint16_t>((key >> (48 - 8 * i)) & 0xff);
  }
  return out;
}

std::string SemanticId::to_string() const {
  return fmt::format("[{}]", fmt::join(digits(), ","));
}

std::strong_ordering operator<=>(const SemanticId& a, const SemanticId& b) {
  return std::lexicographical_compare_three_way(
      a.digits_.begin(), a.digits_.begin() + a.size_, b.digits_.begin(),
      b.digits_.begin() + b.size_);
}

void TokenLayout::validate() const {
  if (digits < 2 || digits > kMaxDigits) {
    throw UsageError(fmt::format("digits must be in [2, {}], got {}", kMaxDigits, digits));
  }
  if (codebook_size < 1 || codebook_size > kMaxLevelCodes) {
    throw UsageError(fmt::format("codebook_size must be in [1, {}], got {}", kMaxLevelCodes,
                                 codebook_size));
  }
  if (id_vocab < 1 || id_vocab > kMaxLevelCodes) {
    throw UsageError(
        fmt::format("id_vocab must be in [1, {}], got {}", kMaxLevelCodes, id_vocab));
  }
}

std::optional<std::size_t> TokenLayout::level_of(Token t) const {
  if (t < kNumSpecials) return std::nullopt;
  const std::size_t rel = t - kNumSpecials;
  const std::size_t level = std::min(rel / codebook_size, digits - 1);
  if (rel - level * codebook_size >= level_size(level)) return std::nullopt;
  return level;
}

void TokenLayout::append_tokens(const SemanticId& id, std::vector<Token>& out) const {
  for (std::size_t i = 0; i < id.size(); ++i) out.push_back(token(i, id[i]));
}

}  // namespace specgr
