#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "textcoherence/corpus.hpp"
#include "textcoherence/embeddings.hpp"

namespace textcoherence {

// Surface-form dictionary keyed by the normalized token sequence of each
// entity name ("united kingdom" -> "United_Kingdom").
class Gazetteer {
 public:
  std::size_t size() const noexcept { return surfaces_.size(); }
  std::size_t max_phrase_len() const noexcept { return max_phrase_len_; }

  // Entity id for a normalized surface (tokens joined by single spaces).
  const std::string* find(std::string_view normalized_surface) const;

  // Adds one surface. When two ids compete for the same surface, the
  // lexicographically smaller id wins, so construction order is irrelevant.
  void add(std::string_view surface, const std::string& entity_id);

  std::vector<std::pair<std::string, std::string>> sorted_entries() const;

 private:
  std::unordered_map<std::string, std::string> surfaces_;
  std::size_t max_phrase_len_ = 0;
};

// Display name of an entity id: an "ENTITY/" prefix is dropped and
// underscores become spaces.
std::string entity_surface(std::string_view entity_id);

// One surface per table token. If any token carries the "ENTITY/" prefix only
// prefixed tokens are treated as entities. Throws InvalidArgument on an
// empty table.
Gazetteer build_gazetteer(const EmbeddingTable& entity_table);

// TSV "surface<TAB>entity_id" lines extend the gazetteer. Ids missing from
// the entity table are rejected with DataError (line number reported).
void load_aliases(Gazetteer& gazetteer, const std::filesystem::path& path,
                  const EmbeddingTable& entity_table);

struct ExtractOptions {
  // Only spans whose first character is an uppercase letter or digit match.
  bool require_capitalized = true;
};

// Greedy longest match, left to right over each sentence's tokens. Requires a
// segmented document; mentions come back in document order.
std::vector<EntityMention> extract_entities(const Document& doc, const Gazetteer& gazetteer,
                                            const ExtractOptions& options = {});

// Distinct ids in first-occurrence order.
std::vector<std::string> entity_set(const std::vector<EntityMention>& mentions);

// Runs extraction over every document and marks it as linked.
void link_corpus(LabeledCorpus& corpus, const Gazetteer& gazetteer,
                 const ExtractOptions& options = {});

}  // namespace textcoherence
