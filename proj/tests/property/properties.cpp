#include "properties.hpp"

#include "oracles.hpp"
#include "world.hpp"

#include "specgr/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>

namespace specgr::testing {
namespace {

using Rng = std::mt19937_64;

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {  // inclusive
  return lo + rng() % (hi - lo + 1);
}

SemanticId random_id(const TokenLayout& layout, Rng& rng, std::size_t length) {
  SemanticId id;
  for (std::size_t d = 0; d < length; ++d) id.push_back(std::uint16_t(rng() % layout.level_size(d)));
  return id;
}

std::vector<ItemIndex> random_history(Rng& rng, std::size_t n, std::size_t max_len = 25) {
  std::vector<ItemIndex> h(uniform(rng, 1, max_len));
  for (auto& i : h) i = ItemIndex(rng() % n);
  return h;
}

std::vector<ItemIndex> random_items(Rng& rng, std::size_t n, std::size_t k) {
  std::set<ItemIndex> s;
  while (s.size() < k) s.insert(ItemIndex(rng() % n));
  return {s.begin(), s.end()};
}

// Runs `check` for `cases` generated cases; a non-empty return is a failure.
class Runner {
 public:
  Runner(std::uint64_t seed, double scale) : seed_(seed), scale_(scale) {}

  void run(const std::string& name, std::size_t cases, const std::function<std::string(Rng&, std::size_t)>& check) {
    const auto start = std::chrono::steady_clock::now();
    PropertyResult r;
    r.name = name;
    r.cases = std::max<std::size_t>(1, std::size_t(double(cases) * scale_));
    Rng rng(seed_ ^ std::hash<std::string>{}(name));
    for (std::size_t c = 0; c < r.cases; ++c) {
      std::string why;
      try {
        why = check(rng, c);
      } catch (const std::exception& e) {
        why = fmt::format("threw: {}", e.what());
      }
      if (!why.empty()) {
        if (r.failures++ == 0) r.first_failure = fmt::format("case {}: {}", c, why);
      }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results_.push_back(std::move(r));
  }

  std::vector<PropertyResult> take() { return std::move(results_); }

 private:
  std::uint64_t seed_;
  double scale_;
  std::vector<PropertyResult> results_;
};

struct SmallCatalog {
  std::optional<Catalog> catalog;
  Matrix rows;
  std::uint64_t seed = 0;
};

SmallCatalog random_catalog(Rng& rng) {
  TokenLayout layout;
  layout.digits = uniform(rng, 2, 4);
  layout.codebook_size = uniform(rng, 2, 6);
  const std::size_t n = uniform(rng, 20, 150);
  layout.id_vocab = n;  // never at capacity
  SmallCatalog out;
  out.rows = gaussian_rows(n, uniform(rng, 3, 8), rng());
  // Duplicated rows force shared prefixes.
  for (std::size_t k = 0; k < n / 5; ++k) out.rows.row(rng() % n) = out.rows.row(rng() % n).eval();
  std::vector<bool> seen(n);
  for (std::size_t i = 0; i < n; ++i) seen[i] = rng() % 4 != 0;
  CatalogOptions o;
  o.layout = layout;
  o.seed = out.seed = rng();
  out.catalog.emplace(Catalog::fit(numbered_ids(n), out.rows, seen, o));
  return out;
}

std::string check_catalog(const SmallCatalog& sc) {
  const Catalog& cat = *sc.catalog;
  std::set<SemanticId> ids;
  for (ItemIndex i = 0; i < cat.size(); ++i) {
    if (cat.semantic_id(i).size() != cat.layout().digits) return "id of wrong length";
    if (!ids.insert(cat.semantic_id(i)).second) return fmt::format("duplicate id {}", cat.semantic_id(i).to_string());
  }
  const auto& mse = cat.codebooks().residual_mse;
  for (std::size_t k = 1; k < mse.size(); ++k) {
    if (mse[k] > mse[k - 1] + 1e-12) return fmt::format("residual grew at level {}: {} > {}", k, mse[k], mse[k - 1]);
  }
  CatalogOptions o;
  o.layout = cat.layout();
  o.seed = sc.seed;
  std::vector<bool> seen(cat.size());
  for (ItemIndex i = 0; i < cat.size(); ++i) seen[i] = cat.seen_in_training(i);
  const Catalog again = Catalog::fit(numbered_ids(cat.size()), sc.rows, seen, o);
  for (ItemIndex i = 0; i < cat.size(); ++i) {
    if (!(again.semantic_id(i) == cat.semantic_id(i))) return "refit with the same seed differs";
  }
  return {};
}

}  // namespace

std::vector<PropertyResult> run_properties(std::uint64_t seed, double scale) {
  Runner run(seed, scale);

  // Catalog: uniqueness, residual monotonicity, seeded determinism.
  std::vector<SmallCatalog> catalogs;
  run.run("catalog uniqueness and determinism", 300, [&](Rng& rng, std::size_t) {
    SmallCatalog sc = random_catalog(rng);
    const std::string why = check_catalog(sc);
    if (catalogs.size() < 40) catalogs.push_back(std::move(sc));
    return why;
  });

  run.run("trie lookup equals linear scan", 3000, [&](Rng& rng, std::size_t c) {
    const Catalog& cat = *catalogs[c % catalogs.size()].catalog;
    // Half the prefixes come from real items so the lookups are non-empty.
    const std::size_t len = uniform(rng, 0, cat.layout().digits);
    const SemanticId p = rng() % 2 ? cat.semantic_id(ItemIndex(rng() % cat.size())).prefix(len)
                                   : random_id(cat.layout(), rng, len);
    std::vector<ItemIndex> got(cat.items_with_prefix(p.digits()).begin(), cat.items_with_prefix(p.digits()).end());
    std::sort(got.begin(), got.end());
    std::vector<ItemIndex> want;
    for (ItemIndex i = 0; i < cat.size(); ++i) {
      if (cat.semantic_id(i).starts_with(p)) want.push_back(i);
    }
    if (got != want) return fmt::format("prefix {}: {} items vs {} by scan", p.to_string(), got.size(), want.size());
    if (len == cat.layout().digits && cat.lookup(p).has_value() != (want.size() == 1)) return std::string("lookup disagrees");
    return std::string();
  });

  auto world = make_world(small_world_options(5));
  const Catalog& cat = *world->catalog;
  const Engine& engine = *world->engine;
  const TokenLayout& layout = cat.layout();
  const std::size_t l = layout.digits;

  run.run("scorer distributions are normalized", 3000, [&](Rng& rng, std::size_t c) {
    const auto h = random_history(rng, cat.size(), 6);
    const TokenSequence x = TokenSequence::from_items(cat, h);
    const SemanticId prefix = random_id(layout, rng, uniform(rng, 0, l - 1));
    std::vector<Token> ctx;
    build_context(layout, x, prefix, ctx);
    const HashScorer hashed(layout, c, c % 3 == 0 ? 4 : 0);
    const Scorer& s = c % 2 ? static_cast<const Scorer&>(*world->scorer) : hashed;
    std::vector<double> lp(s.vocab_size());
    s.score(ctx, lp);
    double mass = 0.0;
    for (double v : lp) mass += std::exp(v);
    if (std::abs(mass - 1.0) > 1e-6) return fmt::format("mass {}", mass);
    const Token t = layout.token(prefix.size(), std::uint16_t(rng() % layout.level_size(prefix.size())));
    if (s.token_logprob(ctx, t) != lp[t]) return fmt::format("point query {} vs {}", s.token_logprob(ctx, t), lp[t]);
    return std::string();
  });

  run.run("full-width beam search equals enumeration", 500, [&](Rng& rng, std::size_t c) {
    TokenLayout small;
    small.digits = uniform(rng, 2, 3);
    small.codebook_size = uniform(rng, 2, 3);
    small.id_vocab = uniform(rng, 2, 4);
    const HashScorer s(small, rng(), c % 2 ? 3 : 0);
    std::vector<SemanticId> hist(uniform(rng, 0, 3));
    for (auto& id : hist) id = random_id(small, rng, small.digits);
    const TokenSequence x = TokenSequence::from_ids(small, hist);
    const std::size_t steps = uniform(rng, 1, small.digits);
    const auto want = enumerate_paths(s, x.tokens(), steps);
    const auto got = beam_search(s, x, want.size() + uniform(rng, 0, 3), steps);
    if (got.size() != want.size()) return fmt::format("{} beams vs {} paths", got.size(), want.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
      if (!(got[k].prefix == want[k].path)) return fmt::format("rank {}: {} vs {}", k, got[k].prefix.to_string(), want[k].path.to_string());
      if (std::abs(got[k].score - want[k].score) > 1e-12) return fmt::format("rank {} score", k);
    }
    return std::string();
  });

  run.run("beam levels and score order", 400, [&](Rng& rng, std::size_t) {
    const TokenSequence x = TokenSequence::from_items(cat, random_history(rng, cat.size()));
    const std::size_t steps = uniform(rng, 1, l);
    const auto beams = beam_search(*world->scorer, x, uniform(rng, 1, 80), steps);
    for (std::size_t k = 0; k < beams.size(); ++k) {
      if (beams[k].prefix.size() != steps) return std::string("beam of wrong length");
      for (std::size_t d = 0; d < steps; ++d) {
        if (!layout.code_in_level(d, beams[k].prefix[d])) return fmt::format("digit {} out of its level", d);
      }
      if (k > 0 && beams[k].score > beams[k - 1].score) return fmt::format("scores rise at rank {}", k);
    }
    return std::string();
  });

  run.run("acceptance is monotone in gamma", 1500, [&](Rng& rng, std::size_t) {
    const TokenSequence x = TokenSequence::from_items(cat, random_history(rng, cat.size()));
    const auto batch = random_items(rng, cat.size(), uniform(rng, 1, 60));
    double g1 = -0.5 - 3.0 * double(rng() % 1000) / 1000.0, g2 = -0.5 - 3.0 * double(rng() % 1000) / 1000.0;
    if (g1 > g2) std::swap(g1, g2);
    const auto loose = verify(*world->scorer, x, batch, cat, g1);
    const auto tight = verify(*world->scorer, x, batch, cat, g2);
    for (std::size_t k = 0; k < batch.size(); ++k) {
      if (loose[k].score != tight[k].score) return std::string("score depends on gamma");
      if (tight[k].accepted && !loose[k].accepted) return fmt::format("item {} accepted at {} but not at {}", batch[k], g2, g1);
    }
    return std::string();
  });

  run.run("engine outputs are distinct, bounded and contained", 1500, [&](Rng& rng, std::size_t c) {
    const auto h = random_history(rng, cat.size());
    SpecGRConfig cfg;
    cfg.K = uniform(rng, 1, 60);
    cfg.delta = uniform(rng, 1, 80);
    cfg.beta = uniform(rng, 1, 80);
    cfg.gamma = kGammaGrid[rng() % kGammaGrid.size()] + (c % 5 == 0 ? 1.0 : 0.0);
    cfg.guided_redrafting = c % 7 != 0;
    cfg.record_trace = true;
    std::optional<std::set<ItemIndex>> subset;
    if (c % 3 == 0) {
      const auto s = random_items(rng, cat.size(), uniform(rng, 1, 300));
      cfg.subset = s;
      subset.emplace(s.begin(), s.end());
    }
    const auto out = engine.recommend(h, cfg);
    if (out.entries.size() > cfg.K) return std::string("more than K items");
    if (out.iterations_used > l || out.decode_steps_used > l) return std::string("iteration bound broken");
    std::set<ItemIndex> items, drafted;
    for (const auto& e : out.entries) {
      if (!items.insert(e.item).second) return fmt::format("item {} twice", e.item);
      if (subset && !subset->count(e.item)) return fmt::format("item {} outside the subset", e.item);
    }
    for (std::size_t j = 0; j < out.trace.size(); ++j) {
      const auto& t = out.trace[j];
      std::set<SemanticId> guide(t.guide.begin(), t.guide.end());
      for (ItemIndex i : t.drafted) {
        if (!drafted.insert(i).second) return fmt::format("item {} drafted twice", i);
        if (subset && !subset->count(i)) return fmt::format("drafted {} outside the subset", i);
        if (!guide.empty() && !guide.count(cat.semantic_id(i).prefix(guide.begin()->size()))) {
          return fmt::format("iteration {} drafted {} outside the guide", j + 1, i);
        }
      }
      if (j > 0 && cfg.guided_redrafting && guide.empty() && !t.drafted.empty()) return std::string("unguided redraft");
    }
    const auto again = engine.recommend(h, cfg);
    if (again.items() != out.items()) return std::string("not deterministic");
    return std::string();
  });

  run.run("rejecting everything falls back to beam search", 300, [&](Rng& rng, std::size_t) {
    const auto h = random_history(rng, cat.size());
    SpecGRConfig cfg;
    cfg.K = uniform(rng, 1, 50);
    cfg.beta = uniform(rng, cfg.K, 80);
    cfg.delta = uniform(rng, 1, 80);
    cfg.gamma = kRejectAll;
    const auto a = engine.recommend(h, cfg);
    const auto b = engine.beam_only(h, cfg.beta, cfg.K);
    if (a.items() != b.items()) return std::string("item lists differ");
    if (a.decode_steps_used != l) return fmt::format("{} decode steps", a.decode_steps_used);
    return std::string();
  });

  run.run("decode steps never rise as gamma falls", 300, [&](Rng& rng, std::size_t) {
    const auto h = random_history(rng, cat.size());
    SpecGRConfig cfg;
    cfg.K = rng() % 2 ? 10 : 50;
    std::size_t prev = l + 1;
    for (double g : {-1.0, -1.4, -1.5, -1.6, -1.7, -1.8, -2.5, kAcceptAll}) {
      cfg.gamma = g;
      const std::size_t steps = engine.recommend(h, cfg).decode_steps_used;
      if (steps > prev) return fmt::format("{} steps at gamma {} after {}", steps, g, prev);
      prev = steps;
    }
    return std::string();
  });

  run.run("subset rankers stay inside the subset", 400, [&](Rng& rng, std::size_t c) {
    const auto h = random_history(rng, cat.size());
    const auto subset = random_items(rng, cat.size(), uniform(rng, 1, 200));
    const std::set<ItemIndex> allowed(subset.begin(), subset.end());
    const std::size_t K = uniform(rng, 1, 20);
    const auto beam = engine.constrained_beam_rank(h, subset, std::max<std::size_t>(K, uniform(rng, 1, 60)), K);
    const auto batch = engine.batch_score_rank(h, subset, K);
    if (batch.entries.size() != std::min(K, subset.size())) return std::string("batch scoring is short");
    for (const auto* list : {&beam, &batch}) {
      std::set<ItemIndex> items;
      for (const auto& e : list->entries) {
        if (!allowed.count(e.item)) return fmt::format("item {} outside the subset", e.item);
        if (!items.insert(e.item).second) return fmt::format("item {} twice", e.item);
      }
    }
    (void)c;
    return std::string();
  });

  run.run("draft batches are fresh, filtered and ordered", 600, [&](Rng& rng, std::size_t) {
    const auto h = random_history(rng, cat.size());
    const DraftIndex& index = *world->aux_index;
    const auto q = index.query(TokenSequence::from_items(cat, h), h);
    const auto exclude = random_items(rng, cat.size(), uniform(rng, 1, 50));
    std::optional<std::vector<ItemIndex>> subset;
    if (rng() % 2) subset = random_items(rng, cat.size(), uniform(rng, 1, 400));
    DraftStream stream(index, cat, q, exclude,
                       subset ? std::optional<std::span<const ItemIndex>>(*subset) : std::nullopt);
    std::set<ItemIndex> seen(exclude.begin(), exclude.end());
    const std::set<ItemIndex> allowed = subset ? std::set<ItemIndex>(subset->begin(), subset->end()) : std::set<ItemIndex>{};
    for (int round = 0; round < 5; ++round) {
      std::optional<PrefixSet> prefixes;
      if (round > 0) {
        std::vector<SemanticId> p;
        const std::size_t len = uniform(rng, 1, l - 1);
        for (std::size_t k = uniform(rng, 1, 40); k > 0; --k) p.push_back(cat.semantic_id(ItemIndex(rng() % cat.size())).prefix(len));
        prefixes.emplace(p);
      }
      const auto batch = stream.next_batch(uniform(rng, 1, 60), prefixes ? &*prefixes : nullptr);
      for (std::size_t k = 0; k < batch.size(); ++k) {
        const ItemIndex i = batch[k];
        if (!seen.insert(i).second) return fmt::format("item {} proposed again", i);
        if (subset && !allowed.count(i)) return fmt::format("item {} outside the subset", i);
        if (prefixes && !prefixes->contains(cat.semantic_id(i))) return fmt::format("item {} outside the prefixes", i);
        if (k > 0) {
          const float a = stream.similarity(batch[k - 1]), b = stream.similarity(i);
          if (b > a || (b == a && i < batch[k - 1])) return fmt::format("batch order broken at {}", k);
        }
      }
    }
    return std::string();
  });

  return run.take();
}

}  // namespace specgr::testing
