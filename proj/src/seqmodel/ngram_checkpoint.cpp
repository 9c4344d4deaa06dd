#include "specgr/binary_io.hpp"
#include "specgr/errors.hpp"
#include "specgr/ngram_scorer.hpp"

#include <algorithm>

namespace specgr {

namespace {
constexpr std::string_view kMagic = "SGRNGRM1";
}

void NGramScorer::save(std::ostream& out) const {
  nlohmann::json header = {
      {"order", options_.order},
      {"vocab_size", layout_.vocab_size()},
      {"smoothing", options_.smoothing},
      {"embed_dim", options_.embed_dim},
      {"seed", options_.seed},
      {"cooc_window", options_.cooc_window},
      {"key_bits", key_bits_},
      {"layout",
       {{"digits", layout_.digits},
        {"codebook_size", layout_.codebook_size},
        {"id_vocab", layout_.id_vocab}}},
  };
  io::write_preamble(out, kMagic, header);
  for (const Table& table : tables_) {
    std::vector<std::uint64_t> keys;
    keys.reserve(table.size());
    for (const auto& kv : table) keys.push_back(kv.first);
    std::sort(keys.begin(), keys.end());
    io::write_pod<std::uint64_t>(out, keys.size());
    for (std::uint64_t key : keys) {
      const ContextStats& stats = table.at(key);
      io::write_pod<std::uint64_t>(out, key);
      io::write_pod<std::uint64_t>(out, stats.total);
      io::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(stats.followers.size()));
      for (const auto& [tok, c] : stats.followers) {
        io::write_pod<std::uint32_t>(out, tok);
        io::write_pod<std::uint64_t>(out, c);
      }
    }
  }
  io::write_array(out, token_vectors_.data(), token_vectors_.size());
  if (!out) throw DataError("failed writing n-gram checkpoint");
}

NGramScorer NGramScorer::load(std::istream& in) {
  const auto header = io::read_preamble(in, kMagic);
  TokenLayout layout;
  NGramOptions options;
  try {
    const auto& lj = header.at("layout");
    layout.digits = lj.at("digits").get<std::size_t>();
    layout.codebook_size = lj.at("codebook_size").get<std::size_t>();
    layout.id_vocab = lj.at("id_vocab").get<std::size_t>();
    options.order = header.at("order").get<std::size_t>();
    options.smoothing = header.at("smoothing").get<double>();
    options.embed_dim = header.at("embed_dim").get<std::size_t>();
    options.seed = header.at("seed").get<std::uint64_t>();
    options.cooc_window = header.at("cooc_window").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(fmt::format("n-gram header at byte offset 16: {}", e.what()));
  }
  NGramScorer model = [&] {
    try {
      return NGramScorer(layout, options);
    } catch (const UsageError& e) {
      throw FormatError(fmt::format("n-gram header at byte offset 16: {}", e.what()));
    }
  }();
  if (header.value("vocab_size", std::size_t{0}) != layout.vocab_size() ||
      header.value("key_bits", 0u) != model.key_bits_) {
    throw FormatError("n-gram header at byte offset 16 disagrees with its layout");
  }

  const std::size_t v = layout.vocab_size();
  for (std::size_t m = 0; m < model.tables_.size(); ++m) {
    const auto offset = static_cast<long long>(in.tellg());
    const auto n = io::read_pod<std::uint64_t>(in);
    if (n > (1ull << 40)) throw FormatError(fmt::format("implausible table size at byte offset {}", offset));
    Table& table = model.tables_[m];
    table.reserve(n);
    for (std::uint64_t e = 0; e < n; ++e) {
      const auto key = io::read_pod<std::uint64_t>(in);
      ContextStats stats;
      stats.total = io::read_pod<std::uint64_t>(in);
      const auto nf = io::read_pod<std::uint32_t>(in);
      stats.followers.reserve(nf);
      std::uint64_t sum = 0;
      for (std::uint32_t f = 0; f < nf; ++f) {
        const auto at = static_cast<long long>(in.tellg());
        const auto tok = io::read_pod<std::uint32_t>(in);
        const auto c = io::read_pod<std::uint64_t>(in);
        if (tok >= v || (!stats.followers.empty() && tok <= stats.followers.back().first)) {
          throw FormatError(fmt::format("bad follower token {} at byte offset {}", tok, at));
        }
        stats.followers.emplace_back(tok, c);
        sum += c;
      }
      if (sum != stats.total) {
        throw FormatError(fmt::format("context total mismatch before byte offset {}",
                                      static_cast<long long>(in.tellg())));
      }
      table.emplace(key, std::move(stats));
    }
  }
  model.token_vectors_.resize(v * options.embed_dim);
  io::read_array(in, model.token_vectors_.data(), model.token_vectors_.size());
  return model;
}

}  // namespace specgr
