#include <doctest.h>

#include <cstdlib>
#include <functional>
#include <iostream>
#include <fstream>
#include <sstream>

#include "app/commands.hpp"
#include "app/run_config.hpp"
#include "support/synthetic.hpp"
#include "textcoherence/error.hpp"

using namespace textcoherence;
using namespace textcoherence::app;
namespace fs = std::filesystem;

namespace {

const fs::path kData = TEXTCOHERENCE_TEST_DATA_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig toy_config(const fs::path& out) {
  RunConfig c;
  apply_settings(c, {{"fake_csv", (kData / "toy/fake.csv").string()},
                     {"legit_csv", (kData / "toy/legit.csv").string()},
                     {"embeddings", (kData / "toy/words.vec").string()},
                     {"esa_kb", (kData / "toy/kb").string()},
                     {"entities", (kData / "toy/entities.vec").string()},
                     {"output_dir", out.string()}});
  return c;
}

std::string field_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("settings") {
  RunConfig c;
  apply_setting(c, "methods", "entity, embedding");
  CHECK(c.methods == std::vector<Method>{Method::Embedding, Method::Entity});
  apply_setting(c, "hist_esa", "0.2,0.8,12");
  CHECK(c.histograms[Method::Esa].bucket_count == 12);
  apply_setting(c, "sd", "sample");
  CHECK(c.sd == SdConvention::Sample);
  apply_setting(c, "fake_csv", "a.csv,b.csv");
  apply_setting(c, "fake_csv", "c.csv");
  CHECK(c.corpora.size() == 1);

  CHECK(field_of([&] { apply_setting(c, "methods", "magic"); }) == "methods");
  CHECK(field_of([&] { apply_setting(c, "hist_entity", "1,0,5"); }) == "hist_entity");
  CHECK(field_of([&] { apply_setting(c, "workers", "0"); }) == "workers");
  CHECK(field_of([&] { apply_setting(c, "esa_weighting", "bm25"); }) == "esa_weighting");
  CHECK(field_of([&] { apply_setting(c, "include_title", "maybe"); }) == "include_title");
  CHECK(field_of([&] { apply_setting(c, "colour", "red"); }) == "colour");
}

TEST_CASE("config file") {
  const fs::path dir = tc_test::scratch_dir("config");
  std::ofstream(dir / "run.conf") << "# comment\nmethods = esa\n\nttest = pooled  # trailing\n";
  std::ofstream(dir / "bad.conf") << "methods esa\n";
  RunConfig c;
  apply_settings(c, read_config_file(dir / "run.conf"));
  CHECK(c.methods == std::vector<Method>{Method::Esa});
  CHECK(c.ttest == TTestVariant::Pooled);
  CHECK_THROWS_AS(read_config_file(dir / "bad.conf"), ConfigError);
}

TEST_CASE("environment overrides resource paths only") {
  ::setenv("TEXTCOHERENCE_EMBEDDINGS", "/tmp/vectors.vec", 1);
  const Settings s = environment_settings();
  ::unsetenv("TEXTCOHERENCE_EMBEDDINGS");
  REQUIRE(s.size() == 1);
  CHECK(s[0].first == "embeddings");
}

TEST_CASE("validation names the offending field before reading input") {
  const fs::path out = tc_test::scratch_dir("validate");
  RunConfig c = toy_config(out);
  CHECK_NOTHROW(validate(c, Requirement::Corpus));

  RunConfig no_vectors = c;
  no_vectors.embeddings.reset();
  CHECK(field_of([&] { validate(no_vectors, Requirement::Corpus); }) == "embeddings");
  CHECK(field_of([&] { cmd_score(no_vectors, std::cerr); }) == "embeddings");
  CHECK(fs::is_empty(out));

  RunConfig missing = c;
  missing.entities = "/nonexistent/entities.vec";
  CHECK(field_of([&] { validate(missing, Requirement::Corpus); }) == "entities");

  RunConfig only_esa = c;
  only_esa.esa_kb.reset();
  CHECK(field_of([&] { validate(only_esa, Requirement::Corpus); }) == "esa_index");

  RunConfig no_corpus;
  CHECK(field_of([&] { validate(no_corpus, Requirement::Corpus); }) == "fake_csv");
  CHECK(field_of([&] { validate(no_corpus, Requirement::CorpusOrScores); }) == "scores");

  RunConfig aliases = c;
  aliases.entities.reset();
  aliases.methods = {Method::Embedding};
  aliases.aliases = kData / "toy/words.vec";
  CHECK(field_of([&] { validate(aliases, Requirement::Corpus); }) == "aliases");
}

TEST_CASE("score matches the golden file") {
  const fs::path out = tc_test::scratch_dir("golden-score");
  RunConfig c = toy_config(out);
  apply_setting(c, "methods", "embedding");
  std::ostringstream log;
  const auto written = cmd_score(c, log);
  REQUIRE(written.size() == 1);
  CHECK(slurp(written[0]) == slurp(kData / "golden/scores_embedding.csv"));
  CHECK(log.str().find("embedding: undefined scores") != std::string::npos);

  apply_setting(c, "methods", "embedding,esa,entity");
  CHECK(cmd_score(c, log).size() == 3);
}

TEST_CASE("compare matches the golden summary, from a corpus or from score files") {
  const fs::path out = tc_test::scratch_dir("golden-compare");
  RunConfig c = toy_config(out);
  apply_setting(c, "methods", "embedding");
  std::ostringstream log;
  cmd_compare(c, log);
  CHECK(slurp(out / "summary.csv") == slurp(kData / "golden/summary.csv"));

  RunConfig from_scores;
  apply_settings(from_scores, {{"scores", (kData / "golden/scores_embedding.csv").string()},
                               {"output_dir", (out / "again").string()}});
  cmd_compare(from_scores, log);
  // Scores re-read at 6 decimals give a slightly different summary.
  CHECK(slurp(out / "again/summary.csv") == slurp(kData / "golden/summary_from_scores.csv"));
  const std::string md = slurp(out / "again/summary.md");
  CHECK(md.find("| Fake | 0.261939 (0.1346) |") != std::string::npos);
  CHECK(md.find("**0.016652**") != std::string::npos);
  CHECK(md.find("ttest = welch") != std::string::npos);
}

TEST_CASE("compare rejects single-label input") {
  const fs::path dir = tc_test::scratch_dir("single-label");
  std::ofstream(dir / "s.csv") << "doc_id,label,method,value,element_count,pair_count,status\n"
                                  "a,fake,embedding,0.5,2,1,ok\nb,fake,embedding,0.6,2,1,ok\n";
  RunConfig c;
  apply_settings(c, {{"scores", (dir / "s.csv").string()}, {"output_dir", (dir / "out").string()}});
  CHECK_THROWS_AS(cmd_compare(c, std::cerr), InvalidArgument);
}

TEST_CASE("equal score sets give 0% and p = 1") {
  std::vector<CoherenceScore> fake, legit;
  for (double v : {0.2, 0.4, 0.6}) {
    fake.push_back({"f", Label::Fake, Method::Esa, v, 2, 1, ScoreStatus::Ok});
    legit.push_back({"l", Label::Legitimate, Method::Esa, v, 2, 1, ScoreStatus::Ok});
  }
  const std::vector<MethodSummary> rows = {{Method::Esa, compare(fake, legit)}};
  const std::string csv = render_summary_csv(rows);
  CHECK(csv.find(",0.00,0.000000,") != std::string::npos);
  CHECK(csv.find("1.00000E+00") != std::string::npos);
}

TEST_CASE("reference means reproduce the difference column") {
  const std::vector<std::pair<double, double>> means = {{0.546518, 0.567870}, {0.999218, 0.999474},
                                                        {0.277454, 0.286689}, {0.468907, 0.506322},
                                                        {0.995245, 0.997276}, {0.307874, 0.318574}};
  const char* expected[] = {"| 3.91% |", "| 0.03% |", "| 3.33% |", "| 7.98% |", "| 0.20% |", "| 3.48% |"};
  for (std::size_t i = 0; i < means.size(); ++i) {
    std::vector<MethodSummary> rows(1);
    rows[0].method = Method::Embedding;
    rows[0].summary.fake.mean = means[i].first;
    rows[0].summary.legitimate.mean = means[i].second;
    rows[0].summary.percent_difference = percent_difference(means[i].first, means[i].second);
    CHECK(render_summary_markdown(rows, RunConfig{}).find(expected[i]) != std::string::npos);
  }
}

TEST_CASE("stats on a hand-counted fixture") {
  const fs::path dir = tc_test::scratch_dir("stats5");
  std::ofstream(dir / "c.jsonl")
      << R"({"id":"f1","label":"fake","text":"Alder Finance rose."})" "\n"
      << R"({"id":"f2","label":"fake","text":"Cedar Bank fell. Paris was calm."})" "\n"
      << R"({"id":"f3","label":"fake","text":"Rain fell. Snow fell. Wind blew."})" "\n"
      << R"({"id":"l1","label":"legitimate","text":"Brook Farms grew. Brook Farms sold."})" "\n"
      << R"({"id":"l2","label":"legitimate","text":"Cedar Bank and Alder Finance met. Paris hosted. Brook Farms came. All left."})" "\n";
  RunConfig c;
  apply_settings(c, {{"jsonl", (dir / "c.jsonl").string()}, {"output_dir", (dir / "out").string()}});
  std::ostringstream log;
  cmd_stats(c, log);
  CHECK(slurp(dir / "out/dataset_stats.csv") ==
        "label,articles,sentences_mean,sentences_sd,entities_mean,entities_sd\n"
        "fake,3,2.000000,0.816497,,\n"
        "legitimate,2,3.000000,1.000000,,\n");
  CHECK(slurp(dir / "out/dataset_stats.md").find("| Fake | 3 | 2.00 (0.82) | n/a |") != std::string::npos);

  apply_setting(c, "entities", (kData / "toy/entities.vec").string());
  cmd_stats(c, log);
  CHECK(slurp(dir / "out/dataset_stats.csv") ==
        "label,articles,sentences_mean,sentences_sd,entities_mean,entities_sd\n"
        "fake,3,2.000000,0.816497,1.000000,0.816497\n"
        "legitimate,2,3.000000,1.000000,2.500000,1.500000\n");
}

TEST_CASE("histogram tsv") {
  std::vector<std::pair<Label, std::vector<double>>> scores = {{Label::Fake, {0.2, 0.45, 0.55, 0.95}},
                                                               {Label::Legitimate, {}}};
  const Histogram h = build_histogram(scores, HistogramSpec{0.4, 0.6, 2});
  std::ostringstream log;
  const std::string tsv = render_histogram_tsv(Method::Entity, h, log);
  CHECK(tsv ==
        "# method=entity\n"
        "# lower=0.400000 upper=0.600000 buckets=2\n"
        "# fake n=4 clamped_below=1 clamped_above=1\n"
        "bucket_low\tbucket_high\tfake_pct\n"
        "0.400000\t0.500000\t50.000000\n"
        "0.500000\t0.600000\t50.000000\n");
  CHECK(log.str().find("legit_pct column omitted") != std::string::npos);

  const Histogram def = build_histogram(scores, HistogramSpec{});
  std::size_t rows = 0;
  for (char ch : render_histogram_tsv(Method::Entity, def, log)) rows += ch == '\n';
  CHECK(rows == 3 + 1 + 20);
}

TEST_CASE("p and sd formatting") {
  CHECK(format_p(0.016652, false) == "0.016652");
  CHECK(format_p(5.07e-77, false) == "5.07E-77");
  CHECK(format_p(0.0, true) == "0 (degenerate)");
  CHECK(format_sd(0.0070) == "0.0070");
  CHECK(format_sd(0.00012) == "1.20E-04");
}

TEST_CASE("report is deterministic across worker counts") {
  const fs::path a = tc_test::scratch_dir("report-a");
  const fs::path b = tc_test::scratch_dir("report-b");
  RunConfig ca = toy_config(a);
  RunConfig cb = toy_config(b);
  cb.workers = 4;
  std::ostringstream log;
  const auto files = cmd_report(ca, log);
  cmd_report(cb, log);
  CHECK(files.size() == 11);
  for (const fs::path& f : files) CHECK(slurp(f) == slurp(b / f.filename()));
}

TEST_CASE("build-esa-index writes a loadable index") {
  const fs::path dir = tc_test::scratch_dir("build-esa");
  std::ostringstream log;
  EsaBuildOptions o;
  o.weighting = EsaWeighting::Tf;
  cmd_build_esa_index(kData / "toy/kb", dir / "idx/toy.esa", o, log);
  const EsaIndex idx = load_esa_index(dir / "idx/toy.esa");
  CHECK(idx.doc_count() == 4);
  CHECK(idx.weighting() == EsaWeighting::Tf);
  CHECK_THROWS_AS(cmd_build_esa_index(dir / "missing", dir / "x.esa", o, log), ConfigError);
}
