#include "textcoherence/entitylink.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "textcoherence/error.hpp"
#include "textcoherence/text.hpp"

namespace textcoherence {

namespace {

constexpr std::string_view kEntityPrefix = "ENTITY/";

std::string normalize_surface(std::string_view surface) {
  std::string key;
  for (const std::string& t : tokenize(surface)) {
    if (!key.empty()) key.push_back(' ');
    key += t;
  }
  return key;
}

}  // namespace

const std::string* Gazetteer::find(std::string_view normalized_surface) const {
  const auto it = surfaces_.find(std::string(normalized_surface));
  return it == surfaces_.end() ? nullptr : &it->second;
}

void Gazetteer::add(std::string_view surface, const std::string& entity_id) {
  std::string key = normalize_surface(surface);
  if (key.empty()) return;
  const std::size_t len = static_cast<std::size_t>(std::count(key.begin(), key.end(), ' ')) + 1;
  const auto [it, inserted] = surfaces_.emplace(std::move(key), entity_id);
  if (!inserted && entity_id < it->second) it->second = entity_id;
  max_phrase_len_ = std::max(max_phrase_len_, len);
}

std::vector<std::pair<std::string, std::string>> Gazetteer::sorted_entries() const {
  std::vector<std::pair<std::string, std::string>> out(surfaces_.begin(), surfaces_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::string entity_surface(std::string_view entity_id) {
  if (entity_id.substr(0, kEntityPrefix.size()) == kEntityPrefix) {
    entity_id.remove_prefix(kEntityPrefix.size());
  }
  std::string out(entity_id);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

Gazetteer build_gazetteer(const EmbeddingTable& entity_table) {
  if (entity_table.empty()) throw InvalidArgument("build_gazetteer: empty entity table");
  const auto& tokens = entity_table.tokens();
  const bool prefixed = std::any_of(tokens.begin(), tokens.end(), [](const std::string& t) {
    return t.rfind(kEntityPrefix, 0) == 0;
  });
  Gazetteer gazetteer;
  for (const std::string& id : tokens) {
    if (prefixed && id.rfind(kEntityPrefix, 0) != 0) continue;
    gazetteer.add(entity_surface(id), id);
  }
  return gazetteer;
}

void load_aliases(Gazetteer& gazetteer, const std::filesystem::path& path,
                  const EmbeddingTable& entity_table) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open alias file: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const std::string where = path.string() + ": line " + std::to_string(line_no);
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw DataError(where + ": expected surface<TAB>entity_id");
    const std::string id(trim(std::string_view(line).substr(tab + 1)));
    if (!entity_table.contains(id)) {
      throw DataError(where + ": entity '" + id + "' has no vector in the entity table");
    }
    gazetteer.add(std::string_view(line).substr(0, tab), id);
  }
}

std::vector<EntityMention> extract_entities(const Document& doc, const Gazetteer& gazetteer,
                                            const ExtractOptions& options) {
  std::vector<EntityMention> mentions;
  const std::size_t max_len = gazetteer.max_phrase_len();
  if (max_len == 0) return mentions;

  for (const Sentence& sentence : doc.sentences) {
    const bool in_title = sentence.from_title();
    std::string_view source;
    std::size_t base = 0;
    if (in_title) {
      if (!doc.title) continue;
      source = *doc.title;
      base = static_cast<std::size_t>(trim(source).data() - source.data());
    } else {
      source = doc.text;
      base = sentence.begin;
    }

    const auto spans = token_spans(sentence.text);
    std::vector<std::string> norm;
    norm.reserve(spans.size());
    for (const TokenSpan& s : spans) {
      norm.push_back(normalize_token(std::string_view(sentence.text).substr(s.begin, s.end - s.begin)));
    }

    std::size_t i = 0;
    while (i < spans.size()) {
      const char first = sentence.text[spans[i].begin];
      const bool capitalized = (first >= 'A' && first <= 'Z') || (first >= '0' && first <= '9');
      std::size_t matched = 0;
      const std::string* id = nullptr;
      if (capitalized || !options.require_capitalized) {
        std::string key;
        std::vector<std::string> keys;
        const std::size_t limit = std::min(max_len, spans.size() - i);
        for (std::size_t len = 1; len <= limit; ++len) {
          if (len > 1) key.push_back(' ');
          key += norm[i + len - 1];
          keys.push_back(key);
        }
        for (std::size_t len = limit; len >= 1; --len) {
          if (const std::string* found = gazetteer.find(keys[len - 1])) {
            id = found;
            matched = len;
            break;
          }
        }
      }
      if (matched == 0) {
        ++i;
        continue;
      }
      EntityMention m;
      m.start = base + spans[i].begin;
      m.end = base + spans[i + matched - 1].end;
      m.surface = std::string(source.substr(m.start, m.end - m.start));
      m.entity_id = *id;
      m.in_title = in_title;
      mentions.push_back(std::move(m));
      i += matched;
    }
  }
  return mentions;
}

std::vector<std::string> entity_set(const std::vector<EntityMention>& mentions) {
  std::vector<std::string> ids;
  std::unordered_set<std::string_view> seen;
  for (const EntityMention& m : mentions) {
    if (seen.insert(m.entity_id).second) ids.push_back(m.entity_id);
  }
  return ids;
}

void link_corpus(LabeledCorpus& corpus, const Gazetteer& gazetteer, const ExtractOptions& options) {
  for (Document& doc : corpus.documents) {
    doc.entity_mentions = extract_entities(doc, gazetteer, options);
    doc.entities_linked = true;
  }
}

}  // namespace textcoherence
