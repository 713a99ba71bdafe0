#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "textcoherence/embeddings.hpp"
#include "textcoherence/error.hpp"
#include "textcoherence/esa.hpp"

using namespace textcoherence;

namespace {

EsaIndex build(const std::vector<KbArticle>& kb, EsaWeighting w, bool stopwords = true) {
  EsaBuildOptions o;
  o.weighting = w;
  o.remove_stopwords = stopwords;
  return build_esa_index(kb, o);
}

std::vector<double> densify(const SparseVector& v, std::size_t n) {
  std::vector<double> d(n, 0.0);
  for (const auto& [id, w] : v.entries()) d[id] = w;
  return d;
}

std::string serialize(const EsaIndex& index) {
  std::ostringstream out;
  write_esa_index(index, out);
  return out.str();
}

}  // namespace

TEST_CASE("build_esa_index by hand") {
  const std::vector<KbArticle> kb = {{"A", "x x y"}, {"B", "y z"}};
  const EsaIndex tf = build(kb, EsaWeighting::Tf);
  CHECK(*esa_word_vector(tf, "x") == SparseVector{{0, 2.0}});
  CHECK(*esa_word_vector(tf, "y") == SparseVector{{0, 1.0}, {1, 1.0}});
  CHECK(esa_word_vector(tf, "w") == nullptr);

  const EsaIndex tfidf = build(kb, EsaWeighting::TfIdf);
  CHECK(esa_word_vector(tfidf, "y") == nullptr);  // idf 0
  CHECK(tfidf.df("y") == 2);
  CHECK(esa_word_vector(tfidf, "x")->weight(0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));

  CHECK_THROWS_AS(build_esa_index(std::vector<KbArticle>{}), InvalidArgument);
}

TEST_CASE("token in two of three articles has two nonzeros") {
  const EsaIndex tf = build({{"A", "apple pear"}, {"B", "pear plum"}, {"C", "plum"}}, EsaWeighting::Tf);
  CHECK(esa_word_vector(tf, "pear")->nonzeros() == 2);
}

TEST_CASE("stopwords only affect the knowledge base") {
  const std::vector<KbArticle> kb = {{"A", "the cat and the hat"}, {"B", "a dog"}};
  CHECK(esa_word_vector(build(kb, EsaWeighting::Tf), "the") == nullptr);
  CHECK(esa_word_vector(build(kb, EsaWeighting::Tf, false), "the")->weight(0) == 2.0);
}

TEST_CASE("min_weight prunes") {
  EsaBuildOptions o;
  o.weighting = EsaWeighting::Tf;
  o.min_weight = 2.0;
  const EsaIndex idx = build_esa_index(std::vector<KbArticle>{{"A", "x x y"}, {"B", "y z"}}, o);
  CHECK(esa_word_vector(idx, "x") != nullptr);
  CHECK(esa_word_vector(idx, "y") == nullptr);
}

TEST_CASE("sparse arithmetic") {
  CHECK(mean_sparse(std::vector<SparseVector>{{{0, 1}}, {{1, 1}}}) == SparseVector{{0, 0.5}, {1, 0.5}});
  CHECK(mean_sparse(std::vector<SparseVector>{{{3, 2}}}) == SparseVector{{3, 2}});
  CHECK(mean_sparse(std::vector<SparseVector>{{{0, 2}}, {{0, 1}, {1, 3}}}) == SparseVector{{0, 1.5}, {1, 1.5}});
  CHECK(cosine_sparse(SparseVector{{0, 1}}, SparseVector{{1, 1}}) == 0.0);
  CHECK(cosine_sparse(SparseVector{{0, 1}, {4, 2}}, SparseVector{{0, 1}, {4, 2}}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cosine_sparse(SparseVector{{0, 1}, {1, 1}}, SparseVector{{1, 1}, {2, 1}}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(cosine_sparse(SparseVector{}, SparseVector{{0, 1}}), InvalidArgument);
  CHECK_THROWS(SparseVector(std::map<ConceptId, double>{{0, -1.0}}));
}

TEST_CASE("cosine_sparse agrees with densified cosine") {
  tc_test::World w = tc_test::make_world({1, 1, 4, 3});
  for (EsaWeighting weighting : {EsaWeighting::Tf, EsaWeighting::TfIdf}) {
    const EsaIndex idx = build(w.kb, weighting);
    REQUIRE(idx.doc_count() <= 50);
    const auto tokens = idx.sorted_tokens();
    std::vector<const SparseVector*> vecs;
    for (const std::string& t : tokens) {
      if (const SparseVector* v = idx.word_vector(t)) vecs.push_back(v);
    }
    for (std::size_t i = 0; i < vecs.size(); ++i) {
      for (std::size_t j = i; j < vecs.size(); j += 3) {
        const double dense = cosine(densify(*vecs[i], idx.doc_count()), densify(*vecs[j], idx.doc_count()));
        CHECK(std::abs(cosine_sparse(*vecs[i], *vecs[j]) - dense) <= 1e-12);
      }
    }
  }
}

TEST_CASE("tf weights add up to each article's token count") {
  const std::vector<KbArticle> kb = {
      {"A", "apple pear apple plum"}, {"B", "plum plum plum"}, {"C", "kiwi apple"}, {"D", "pear"}, {"E", "fig fig kiwi"}};
  const EsaIndex idx = build(kb, EsaWeighting::Tf);
  std::vector<double> totals(kb.size(), 0.0);
  for (const std::string& t : idx.sorted_tokens()) {
    for (const auto& [id, w] : idx.word_vector(t)->entries()) totals[id] += w;
  }
  for (std::size_t c = 0; c < kb.size(); ++c) {
    std::size_t n = 1;
    for (char ch : kb[c].text) n += ch == ' ';
    CHECK(totals[c] == static_cast<double>(n));
  }
}

TEST_CASE("weights match direct counting") {
  const std::vector<std::string> texts = {"apple pear apple plum", "plum plum plum", "kiwi apple", "pear",
                                          "fig fig kiwi"};
  std::vector<KbArticle> kb;
  for (std::size_t i = 0; i < texts.size(); ++i) kb.push_back({"T" + std::to_string(i), texts[i]});
  for (bool tfidf : {false, true}) {
    const EsaIndex idx = build(kb, tfidf ? EsaWeighting::TfIdf : EsaWeighting::Tf);
    for (const auto& [token, expected] : tc_test::oracle::esa_dense(texts, tfidf)) {
      const SparseVector* v = idx.word_vector(token);
      const std::vector<double> got = v ? densify(*v, texts.size()) : std::vector<double>(texts.size(), 0.0);
      for (std::size_t i = 0; i < texts.size(); ++i) CHECK(std::abs(got[i] - expected[i]) <= 1e-12);
    }
  }
}

TEST_CASE("index serialization") {
  tc_test::World w = tc_test::make_world({1, 1, 4, 8});
  const EsaIndex a = build(w.kb, EsaWeighting::TfIdf);
  const EsaIndex b = build(w.kb, EsaWeighting::TfIdf);
  const std::string text = serialize(a);
  CHECK(text == serialize(b));
  std::istringstream in(text);
  const EsaIndex back = read_esa_index(in, "mem");
  CHECK(serialize(back) == text);
  CHECK(back.doc_count() == a.doc_count());
  CHECK(back.df("finance1") == a.df("finance1"));

  std::istringstream bad("not an index\n");
  CHECK_THROWS_AS(read_esa_index(bad, "mem"), DataError);
}

TEST_CASE("load_kb from a directory") {
  const auto dir = tc_test::scratch_dir("kb-dir");
  std::ofstream(dir / "Beta.txt") << "two words";
  std::ofstream(dir / "Alpha.txt") << "one";
  const auto kb = load_kb(dir);
  REQUIRE(kb.size() == 2);
  CHECK(kb[0].title == "Alpha");
  CHECK(kb[1].text == "two words");
}
