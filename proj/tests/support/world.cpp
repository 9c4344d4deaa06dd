#include "world.hpp"

#include <unordered_set>

namespace specgr::testing {

double World::unseen_share(std::span<const ResolvedCase> cases) const {
  if (cases.empty()) return 0.0;
  std::size_t n = 0;
  for (const auto& c : cases) n += c.unseen;
  return double(n) / double(cases.size());
}

std::unique_ptr<World> make_world(const WorldOptions& options) {
  auto w = std::make_unique<World>();
  w->data = generate_synthetic(options.synth);
  w->split = temporal_split(w->data.log, w->data.t_valid, w->data.t_test);
  std::unordered_set<std::string> trained;
  for (const auto& r : w->split.train) trained.insert(r.item);
  std::vector<bool> seen;
  for (const auto& id : w->data.item_ids) seen.push_back(trained.count(id) > 0);

  CatalogOptions co;
  co.layout = options.layout;
  co.seed = options.catalog_seed;
  w->catalog.emplace(Catalog::fit(w->data.item_ids, w->data.embeddings, seen, co));
  const auto corpus = training_corpus(*w->catalog, w->split.train);
  w->scorer.emplace(NGramScorer::fit(options.layout, corpus, options.ngram));
  w->aux_index.emplace(DraftIndex::build(*w->catalog, DraftMode::kAuxiliary));
  w->engine.emplace(*w->catalog, *w->scorer, *w->aux_index);
  if (options.self_index) {
    w->self_index.emplace(DraftIndex::build(*w->catalog, DraftMode::kSelf, &*w->scorer));
    w->self_engine.emplace(*w->catalog, *w->scorer, *w->self_index);
  }
  w->valid = resolve_cases(*w->catalog, w->split.valid);
  w->test = resolve_cases(*w->catalog, w->split.test);
  return w;
}

WorldOptions small_world_options(std::uint64_t seed) {
  WorldOptions o;
  o.synth.num_items = 1200;
  o.synth.num_users = 600;
  o.synth.seed = seed;
  o.layout = TokenLayout{4, 8, 128};
  return o;
}

}  // namespace specgr::testing
