#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace tc_test {

using namespace textcoherence;
namespace fs = std::filesystem;

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

namespace {

const std::vector<std::string> kTopics = {"finance", "sport", "health", "weather", "farming", "science"};
const std::vector<std::string> kEntityPrefixes = {"Alder", "Birch", "Cedar"};
const std::vector<std::string> kCommon = {"report", "today", "said", "people", "week", "new", "official", "time"};
constexpr std::size_t kWordsPerTopic = 12;

std::vector<double> noisy(const std::vector<double>& centre, double sigma, Rng& rng) {
  std::vector<double> v(centre.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = centre[i] + sigma * rng.normal();
  return v;
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string topic_word(std::size_t topic, std::size_t i) { return kTopics[topic] + std::to_string(i); }

std::string entity_name(std::size_t topic, std::size_t i) {
  return kEntityPrefixes[i] + " " + capitalize(kTopics[topic]);
}

std::string sentence(std::size_t topic, Rng& rng) {
  std::vector<std::string> words;
  const std::size_t n = rng.between(5, 9);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.uniform() < 0.75) {
      words.push_back(topic_word(topic, rng.index(kWordsPerTopic)));
    } else {
      words.push_back(kCommon[rng.index(kCommon.size())]);
    }
  }
  if (rng.uniform() < 0.7) {
    const std::size_t pos = rng.index(words.size() + 1);
    words.insert(words.begin() + static_cast<std::ptrdiff_t>(pos), entity_name(topic, rng.index(kEntityPrefixes.size())));
  }
  std::string out;
  for (const std::string& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return capitalize(out) + ".";
}

}  // namespace

World make_world(const WorldOptions& options) {
  Rng rng(options.seed);
  World world;
  world.words = EmbeddingTable("synthetic-words", options.dim);
  world.entities = EmbeddingTable("synthetic-entities", options.dim);

  std::vector<std::vector<double>> centroids;
  for (std::size_t t = 0; t < kTopics.size(); ++t) {
    std::vector<double> c(options.dim);
    for (double& x : c) x = rng.normal();
    centroids.push_back(std::move(c));
  }
  std::vector<double> zero(options.dim, 0.0);
  for (std::size_t t = 0; t < kTopics.size(); ++t) {
    for (std::size_t i = 0; i < kWordsPerTopic; ++i) {
      world.words.insert(topic_word(t, i), noisy(centroids[t], 0.45, rng));
    }
    for (std::size_t i = 0; i < kEntityPrefixes.size(); ++i) {
      std::string id = "ENTITY/" + entity_name(t, i);
      std::replace(id.begin(), id.end(), ' ', '_');
      world.entities.insert(id, noisy(centroids[t], 0.4, rng));
    }
  }
  for (const std::string& w : kCommon) world.words.insert(w, noisy(zero, 1.0, rng));

  for (std::size_t t = 0; t < kTopics.size(); ++t) {
    for (std::size_t a = 0; a < 2; ++a) {
      std::string text;
      for (std::size_t i = 0; i < 60; ++i) {
        text += (rng.uniform() < 0.85 ? topic_word(t, rng.index(kWordsPerTopic)) : kCommon[rng.index(kCommon.size())]);
        text += ' ';
      }
      world.kb.push_back({capitalize(kTopics[t]) + " " + std::to_string(a + 1), text});
    }
  }
  for (std::size_t a = 0; a < 2; ++a) {
    std::string text;
    for (std::size_t i = 0; i < 40; ++i) text += kCommon[rng.index(kCommon.size())] + " ";
    world.kb.push_back({"General " + std::to_string(a + 1), text});
  }

  auto make_doc = [&](Label label, std::size_t n, const std::vector<std::size_t>& topics) {
    Document doc;
    doc.label = label;
    doc.id = std::string(label == Label::Fake ? "fake-" : "legit-") + (n < 10 ? "00" : n < 100 ? "0" : "") +
             std::to_string(n);
    const std::size_t sentences = rng.between(std::max<std::size_t>(4, topics.size()), 8);
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < sentences; ++i) order.push_back(topics[i % topics.size()]);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    for (std::size_t t : order) {
      if (!doc.text.empty()) doc.text += ' ';
      doc.text += sentence(t, rng);
    }
    doc.title = capitalize(kTopics[topics[0]]) + " news";
    return doc;
  };

  for (std::size_t d = 0; d < options.legit_docs; ++d) {
    world.corpus.documents.push_back(make_doc(Label::Legitimate, d, {rng.index(kTopics.size())}));
  }
  for (std::size_t d = 0; d < options.fake_docs; ++d) {
    const std::size_t k = rng.between(2, 3);
    std::vector<std::size_t> topics;
    while (topics.size() < k) {
      const std::size_t t = rng.index(kTopics.size());
      if (std::find(topics.begin(), topics.end(), t) == topics.end()) topics.push_back(t);
    }
    world.corpus.documents.push_back(make_doc(Label::Fake, d, topics));
  }
  world.corpus.source = "synthetic";
  return world;
}

void write_world(const World& world, const fs::path& dir) {
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "corpus.jsonl", std::ios::binary);
    write_jsonl(world.corpus, out);
  }
  {
    std::ofstream out(dir / "words.vec", std::ios::binary);
    write_vectors_text(world.words, out);
  }
  {
    std::ofstream out(dir / "entities.vec", std::ios::binary);
    write_vectors_text(world.entities, out);
  }
  std::ofstream out(dir / "kb.jsonl", std::ios::binary);
  for (const KbArticle& a : world.kb) out << nlohmann::json{{"title", a.title}, {"text", a.text}}.dump() << '\n';
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("textcoherence-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace tc_test
