#include "specgr/ngram_scorer.hpp"

#include "specgr/errors.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>

namespace specgr {

std::uint64_t NGramScorer::ContextStats::count(Token t) const {
  auto it = std::lower_bound(followers.begin(), followers.end(), t,
                             [](const auto& kv, Token tok) { return kv.first < tok; });
  return it != followers.end() && it->first == t ? it->second : 0;
}

NGramScorer::NGramScorer(const TokenLayout& layout, const NGramOptions& options)
    : layout_(layout), options_(options) {
  layout_.validate();
  if (options_.order < 1) throw UsageError("n-gram order must be >= 1");
  if (!(options_.smoothing > 0.0) || !std::isfinite(options_.smoothing)) {
    throw UsageError("n-gram smoothing must be a positive finite number");
  }
  if (options_.cooc_window == 0) options_.cooc_window = 2 * layout_.digits - 1;
  key_bits_ = static_cast<unsigned>(std::bit_width(layout_.vocab_size()));
  if ((options_.order - 1) * key_bits_ > 64) {
    throw UsageError(fmt::format("order {} is too long for a {}-token vocabulary", options_.order,
                                 layout_.vocab_size()));
  }
  tables_.resize(options_.order);
}

std::uint64_t NGramScorer::pack(std::span<const Token> tokens) const {
  std::uint64_t key = 0;
  for (Token t : tokens) key = (key << key_bits_) | (static_cast<std::uint64_t>(t) + 1);
  return key;
}

std::pair<std::size_t, std::size_t> NGramScorer::context_range(std::span<const Token> context) const {
  const std::size_t longest = std::min(options_.order - 1, context.size());
  std::size_t item_prefix = 0;
  while (item_prefix < context.size() &&
         !TokenLayout::is_special(context[context.size() - 1 - item_prefix])) {
    ++item_prefix;
  }
  return {std::min(longest, item_prefix), longest};
}

const NGramScorer::ContextStats* NGramScorer::find(std::span<const Token> context) const {
  const Table& table = tables_[context.size()];
  auto it = table.find(pack(context));
  return it == table.end() ? nullptr : &it->second;
}

NGramScorer NGramScorer::fit(const TokenLayout& layout, std::span<const TokenSequence> corpus,
                             const NGramOptions& options) {
  if (corpus.empty()) throw UsageError("n-gram corpus is empty");
  NGramScorer model(layout, options);
  const std::size_t l = layout.digits;
  const std::size_t max_ctx = model.options_.order - 1;

  std::vector<std::unordered_map<std::uint64_t, std::unordered_map<Token, std::uint64_t>>> raw(
      model.options_.order);
  std::vector<Token> buffer;
  std::size_t events = 0;
  for (const TokenSequence& seq : corpus) {
    const auto tokens = seq.tokens();
    for (std::size_t t = 1; t < seq.num_items(); ++t) {
      // [bos, ID_1 .. ID_t, eos] followed by the digits of item t+1.
      const std::size_t history_end = 1 + t * l;
      const std::size_t keep = std::min(history_end, max_ctx);
      buffer.assign(tokens.begin() + (history_end - keep), tokens.begin() + history_end);
      buffer.push_back(TokenLayout::kEos);
      for (Token target : seq.item_tokens(t)) {
        const std::span<const Token> context(buffer);
        const auto [shortest, longest] = model.context_range(context);
        for (std::size_t m = shortest; m <= longest; ++m) {
          ++raw[m][model.pack(context.last(m))][target];
        }
        buffer.push_back(target);
      }
      ++events;
    }
  }
  if (events == 0) throw UsageError("n-gram corpus has no sequence with two or more items");

  for (std::size_t m = 0; m < raw.size(); ++m) {
    for (auto& [key, followers] : raw[m]) {
      ContextStats stats;
      stats.followers.assign(followers.begin(), followers.end());
      std::sort(stats.followers.begin(), stats.followers.end());
      for (const auto& kv : stats.followers) stats.total += kv.second;
      model.tables_[m].emplace(key, std::move(stats));
    }
  }
  model.fit_embeddings(corpus);
  return model;
}

void NGramScorer::fit_embeddings(std::span<const TokenSequence> corpus) {
  const std::size_t v = layout_.vocab_size();
  Eigen::MatrixXd cooc = Eigen::MatrixXd::Zero(v, v);
  for (const TokenSequence& seq : corpus) {
    const auto tokens = seq.tokens();
    const std::size_t n = tokens.size();
    for (std::size_t p = 1; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q + 1 < n && q - p <= options_.cooc_window; ++q) {
        cooc(tokens[p], tokens[q]) += 1.0;
        cooc(tokens[q], tokens[p]) += 1.0;
      }
    }
  }
  const Eigen::VectorXd marginal = cooc.rowwise().sum();
  const double total = marginal.sum();
  Eigen::MatrixXd ppmi = Eigen::MatrixXd::Zero(v, v);
  if (total > 0.0) {
    for (std::size_t a = 0; a < v; ++a) {
      for (std::size_t b = 0; b < v; ++b) {
        if (cooc(a, b) <= 0.0) continue;
        const double pmi = std::log(cooc(a, b) * total / (marginal(a) * marginal(b)));
        ppmi(a, b) = std::max(0.0, pmi);
      }
    }
  }

  // Eigenvalues come back ascending; keep the largest positive ones.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ppmi);
  const std::size_t d = options_.embed_dim;
  token_vectors_.assign(v * d, 0.0f);
  for (std::size_t k = 0; k < d && k < v; ++k) {
    const Eigen::Index col = static_cast<Eigen::Index>(v - 1 - k);
    const double lambda = solver.eigenvalues()(col);
    if (!(lambda > 1e-12)) break;
    Eigen::VectorXd vec = solver.eigenvectors().col(col);
    Eigen::Index pivot = 0;
    vec.cwiseAbs().maxCoeff(&pivot);
    if (vec(pivot) < 0) vec = -vec;
    const double scale = std::sqrt(lambda);
    for (std::size_t t = 0; t < v; ++t) {
      token_vectors_[t * d + k] = static_cast<float>(vec(t) * scale);
    }
  }
}

// score() and token_logprob() use the same arithmetic, so a point query is
// bit-identical to the matching entry of the full distribution.
void NGramScorer::score(std::span<const Token> context, std::span<double> logprobs) const {
  const std::size_t v = layout_.vocab_size();
  if (logprobs.size() != v) throw UsageError("score output must have vocab_size entries");
  const double prior = options_.smoothing * static_cast<double>(v);
  const auto [shortest, longest] = context_range(context);

  thread_local std::vector<double> probs, counts;
  counts.assign(v, 0.0);
  if (const ContextStats* floor = find(context.last(shortest))) {
    const double norm = 1.0 / (static_cast<double>(floor->total) + prior);
    for (const auto& [tok, c] : floor->followers) counts[tok] = static_cast<double>(c);
    probs.resize(v);
    for (std::size_t t = 0; t < v; ++t) probs[t] = (counts[t] + options_.smoothing) * norm;
    for (const auto& kv : floor->followers) counts[kv.first] = 0.0;
  } else {
    probs.assign(v, 1.0 / static_cast<double>(v));
  }

  for (std::size_t m = shortest + 1; m <= longest; ++m) {
    const ContextStats* stats = find(context.last(m));
    if (stats == nullptr) break;  // longer contexts cannot have been seen either
    const double norm = 1.0 / (static_cast<double>(stats->total) + prior);
    for (const auto& [tok, c] : stats->followers) counts[tok] = static_cast<double>(c);
    for (std::size_t t = 0; t < v; ++t) probs[t] = (counts[t] + prior * probs[t]) * norm;
    for (const auto& kv : stats->followers) counts[kv.first] = 0.0;
  }
  for (std::size_t t = 0; t < v; ++t) logprobs[t] = std::log(probs[t]);
}

double NGramScorer::token_logprob(std::span<const Token> context, Token next) const {
  const double v = static_cast<double>(layout_.vocab_size());
  if (next >= layout_.vocab_size()) throw UsageError(fmt::format("token {} outside vocabulary", next));
  const double prior = options_.smoothing * v;
  const auto [shortest, longest] = context_range(context);

  double p = 1.0 / v;
  if (const ContextStats* floor = find(context.last(shortest))) {
    const double norm = 1.0 / (static_cast<double>(floor->total) + prior);
    p = (static_cast<double>(floor->count(next)) + options_.smoothing) * norm;
  }
  for (std::size_t m = shortest + 1; m <= longest; ++m) {
    const ContextStats* stats = find(context.last(m));
    if (stats == nullptr) break;
    const double norm = 1.0 / (static_cast<double>(stats->total) + prior);
    p = (static_cast<double>(stats->count(next)) + prior * p) * norm;
  }
  return std::log(p);
}

std::vector<float> NGramScorer::encode(std::span<const Token> sequence) const {
  const std::size_t d = options_.embed_dim;
  std::vector<double> acc(d, 0.0);
  std::size_t n = 0;
  for (Token t : sequence) {
    if (TokenLayout::is_special(t)) continue;
    if (t >= layout_.vocab_size()) throw UsageError(fmt::format("token {} outside vocabulary", t));
    const auto vec = token_vector(t);
    for (std::size_t k = 0; k < d; ++k) acc[k] += vec[k];
    ++n;
  }
  std::vector<float> out(d, 0.0f);
  if (n == 0) return out;
  double norm = 0.0;
  for (double& a : acc) {
    a /= static_cast<double>(n);
    norm += a * a;
  }
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (std::size_t k = 0; k < d; ++k) out[k] = static_cast<float>(acc[k] / norm);
  }
  return out;
}

std::uint64_t NGramScorer::context_count(std::span<const Token> context) const {
  if (context.size() >= tables_.size()) return 0;
  const ContextStats* s = find(context);
  return s ? s->total : 0;
}

std::uint64_t NGramScorer::count(std::span<const Token> context, Token next) const {
  if (context.size() >= tables_.size()) return 0;
  const ContextStats* s = find(context);
  return s ? s->count(next) : 0;
}

std::size_t NGramScorer::num_contexts() const {
  std::size_t n = 0;
  for (const Table& t : tables_) n += t.size();
  return n;
}

}  // namespace specgr
