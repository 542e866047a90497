#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "mixid/cli.hpp"

using namespace mixid;
using cli::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(MIXID_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t k;
  while ((k = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, k);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_file(const std::string& name, const std::string& body) {
  auto path = std::filesystem::temp_directory_path() / ("mixid_test_" + name);
  std::ofstream(path) << body;
  return path.string();
}

template <class G>
std::size_t shortest(const G& g, std::size_t max_len, bool normalized) {
  auto els = g.elements();
  auto r = normalized ? search_shortest(g, els, els, max_len) : search_shortest_unnormalized(g, els, els, max_len);
  if (r.found()) {
    EXPECT_TRUE(verify_exhaustive(g, *r.identity, els).identity);
    EXPECT_TRUE(is_reduced(g, *r.identity));
  }
  return r.found() ? r.length() : 0;
}

cli::RunConfig config(const std::string& command) {
  cli::RunConfig c;
  c.command = command;
  c.timing = false;
  c.threads = 2;
  return c;
}

}  // namespace

TEST(Search, SymmetricGroupOfDegreeThree) {
  PermGroup g = PermGroup::symmetric(3);
  EXPECT_EQ(shortest(g, 3, true), 0u);
  EXPECT_EQ(shortest(g, 4, true), 4u);
  EXPECT_EQ(shortest(g, 4, false), 4u);
  // [s^x, s] for a 3-cycle s.
  auto s = perm_from_cycles(3, {{0, 1, 2}});
  auto X = letter_word(g);
  auto S = constant_word(g, s);
  auto w = commutator(g, conjugate(g, S, X), S);
  EXPECT_EQ(w.length(), 4u);
  EXPECT_TRUE(verify_exhaustive(g, w, g.elements()).identity);
}

TEST(Search, DihedralGroupOfOrderEight) {
  PermGroup g = PermGroup::dihedral(4);
  EXPECT_EQ(g.order(), 8u);
  EXPECT_EQ(shortest(g, 3, true), 2u);
  EXPECT_EQ(shortest(g, 3, false), 2u);
}

TEST(Search, NormalizationAgreesWithFullScan) {
  for (const char* spec : {"S 3", "D 4", "D 3", "D 5", "A 4"}) {
    PermGroup g = PermGroup::from_spec(spec);
    const std::size_t max_len = g.order() <= 8 ? 4 : 3;
    for (std::size_t L = 1; L <= max_len; ++L) EXPECT_EQ(shortest(g, L, true), shortest(g, L, false)) << spec << " " << L;
  }
}

TEST(Search, LengthOneIsNeverAnIdentity) {
  for (const char* spec : {"S 3", "D 4", "A 4"}) EXPECT_EQ(shortest(PermGroup::from_spec(spec), 1, false), 0u);
  MatrixGroup g(GroupSpec::parse("PSL 2 3"));
  auto els = enumerate(GroupSpec::parse("PSL 2 3"));
  EXPECT_FALSE(search_shortest(g, els, els, 1).found());
  EXPECT_FALSE(search_shortest_unnormalized(g, els, els, 1).found());
}

TEST(Search, NoShortIdentityForPsl24) {
  const GroupSpec cs = GroupSpec::parse("PGL 2 4");
  MatrixGroup g(cs);
  auto els = enumerate(GroupSpec::parse("PSL 2 4"));
  auto consts = enumerate(cs);
  ASSERT_EQ(els.size(), 60u);
  ASSERT_EQ(consts.size(), 60u);
  auto r = search_shortest(g, els, consts, 3);
  EXPECT_FALSE(r.found());
  EXPECT_GT(r.words, 0u);
}

TEST(Search, BudgetIsEnforced) {
  PermGroup g = PermGroup::symmetric(4);
  auto els = g.elements();
  EXPECT_THROW(search_shortest(g, els, els, 4, 1000), BudgetExceeded);
  EXPECT_THROW(search_shortest_unnormalized(g, els, els, 3, 1000), BudgetExceeded);
}

TEST(Cli, WordFileParsing) {
  std::istringstream in("# spec: PSL 2 5\n\n# a comment\n  x1^1  \n# spec: ignored\nx1^-1 x1^1\n");
  auto f = cli::parse_word_file(in);
  EXPECT_EQ(f.spec, "PSL 2 5");
  ASSERT_EQ(f.words.size(), 2u);
  EXPECT_EQ(f.words[0], "x1^1");
}

TEST(Cli, CountReportInProcess) {
  auto c = config("count");
  c.what = "isotropic";
  c.k = 3;
  c.l = 0;
  c.q = 2;
  auto r = cli::run(c);
  EXPECT_EQ(r.exit_code, 0);
  ASSERT_EQ(r.doc["results"].size(), 1u);
  EXPECT_EQ(r.doc["results"][0]["brute"], 27);
  EXPECT_EQ(r.doc["results"][0]["formula"], 27);
  EXPECT_FALSE(r.doc.contains("wall_time_ms"));

  c.what = "involutions";
  c.m = 2;
  c.q = 3;
  r = cli::run(c);
  EXPECT_EQ(r.doc["results"][0]["brute"], 92);
  EXPECT_TRUE(r.doc["results"][0]["match"].get<bool>());
}

TEST(Cli, ReportHeader) {
  auto c = config("search");
  c.spec = "S 3";
  c.max_len = 4;
  c.seed = 17;
  c.timing = true;
  auto r = cli::run(c);
  EXPECT_EQ(r.doc["schema"], cli::kSchema);
  EXPECT_EQ(r.doc["version"], cli::kVersion);
  EXPECT_EQ(r.doc["seed"], 17);
  EXPECT_EQ(r.doc["spec"], "S 3");
  EXPECT_TRUE(r.doc["budgets"].contains("words"));
  EXPECT_TRUE(r.doc.contains("wall_time_ms"));
  EXPECT_EQ(r.doc["results"][0]["length"], 4);
}

TEST(Cli, InvalidConfigIsReported) {
  auto c = config("search");
  c.spec = "S 3";
  c.budget_words = 0;
  EXPECT_EQ(cli::run(c).exit_code, cli::kBadInput);
  c.budget_words = 10;
  c.command = "nope";
  EXPECT_EQ(cli::run(c).exit_code, cli::kBadInput);
}

TEST(CliBinary, EmptyWordFile) {
  auto path = temp_file("empty.txt", "# spec: PSL 2 5\n");
  auto r = run_cli("verify --word-file " + path);
  EXPECT_EQ(r.code, 0);
  auto doc = json::parse(r.out);
  EXPECT_TRUE(doc["results"].empty());
  EXPECT_EQ(doc["status"], "complete");
}

TEST(CliBinary, VerifySymplecticCatalog) {
  auto r = run_cli("verify --catalog sp --m 2 --q 3 --mode exhaustive");
  ASSERT_EQ(r.code, 0);
  auto doc = json::parse(r.out);
  EXPECT_EQ(doc["group_order"], 51840);
  EXPECT_TRUE(doc["results"][0]["identity"].get<bool>());
  EXPECT_TRUE(doc["results"][0]["ground_truth"].get<bool>());
}

TEST(CliBinary, MixedVerdictsGiveCounterexampleExit) {
  MatrixGroup g(GroupSpec::parse("PSL 2 5"));
  auto id = psl_identity(2, 5);
  auto t = linear(Mat::from_ints(g.field(), 2, {1, 1, 0, 1}));
  Word<SemilinearElement> comm;
  comm.constants = {g.identity(), t, g.inv(t)};
  comm.letters = {{1, 1}, {1, -1}};
  std::string body = "# spec: PSL 2 5\n" + to_string(g, id.word) + "\n" + to_string(g, comm) + "\n";
  auto path = temp_file("mixed.txt", body);
  auto r = run_cli("verify --word-file " + path + " --no-timing");
  EXPECT_EQ(r.code, 2);
  auto doc = json::parse(r.out);
  ASSERT_EQ(doc["results"].size(), 2u);
  EXPECT_TRUE(doc["results"][0]["identity"].get<bool>());
  EXPECT_FALSE(doc["results"][1]["identity"].get<bool>());
  EXPECT_FALSE(doc["results"][1]["witness"].empty());

  auto sampled = run_cli("verify --word-file " + path + " --mode sampled --samples 200");
  EXPECT_EQ(sampled.code, 2);
  EXPECT_EQ(json::parse(sampled.out)["results"][0]["identity"], true);
}

TEST(CliBinary, BudgetExceededExit) {
  auto r = run_cli("verify --catalog sp --m 2 --q 3 --budget-enum 100");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(json::parse(r.out)["status"], "budget_exceeded");
  EXPECT_EQ(run_cli("search --spec \"S 4\" --max-len 4 --budget-words 1000").code, 3);
}

TEST(CliBinary, RerunsAreByteIdentical) {
  const std::string args = "count --what fixedpoints --q 9 --trials 50 --seed 5 --no-timing";
  auto a = run_cli(args), b = run_cli(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto c = run_cli("count --what fixedpoints --q 9 --trials 50 --seed 6 --no-timing");
  EXPECT_NE(a.out, c.out);
  EXPECT_NE(run_cli(args.substr(0, args.size() - 12)).out.find("wall_time_ms"), std::string::npos);
}

TEST(CliBinary, CertifyRejectsSymplecticIdentity) {
  auto r = run_cli("certify --catalog sp --m 2 --q 3");
  EXPECT_EQ(r.code, 1);
  auto doc = json::parse(r.out);
  EXPECT_EQ(doc["results"][0]["outcome"], "identity_candidate");
  EXPECT_EQ(doc["results"][0]["reason"], "involution critical constant");
}

TEST(CliBinary, CertifyWordFile) {
  MatrixGroup g(GroupSpec::parse("PSL 2 7"));
  auto t = linear(Mat::from_ints(g.field(), 2, {1, 1, 0, 1}));
  auto d = linear(Mat::from_ints(g.field(), 2, {2, 0, 0, 4}));
  Word<SemilinearElement> w;
  w.constants = {g.identity(), t, d, g.identity()};
  w.letters = {{1, 1}, {1, -1}, {1, 1}};
  auto path = temp_file("cert.txt", "# spec: PSL 2 7\n" + to_string(g, w) + "\n");
  auto r = run_cli("certify --word-file " + path);
  EXPECT_EQ(r.code, 0);
  auto row = json::parse(r.out)["results"][0];
  EXPECT_EQ(row["outcome"], "nonconstant");
  std::vector<SemilinearElement> a, b;
  for (const auto& s : row["witness_lambda"]) a.push_back(g.parse(s.get<std::string>()));
  for (const auto& s : row["witness_mu"]) b.push_back(g.parse(s.get<std::string>()));
  EXPECT_FALSE(g.equal(evaluate(g, w, a), evaluate(g, w, b)));
}

TEST(CliBinary, SearchAndCatalogAndTsv) {
  auto r = run_cli("search --spec \"PSL 2 4\" --constants-spec \"PGL 2 4\" --max-len 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["results"][0]["statement"], "none <= 3");

  auto cat = run_cli("catalog");
  EXPECT_EQ(cat.code, 0);
  for (const auto& row : json::parse(cat.out)["results"]) EXPECT_TRUE(row["within_bound"].get<bool>()) << row["name"];

  auto tsv = run_cli("count --what isotropic --k 2 --l 1 --q 2 --format tsv");
  EXPECT_EQ(tsv.code, 0);
  EXPECT_NE(tsv.out.find("kind\tinstance\tbrute\tformula\tmatch"), std::string::npos);
  EXPECT_NE(tsv.out.find("isotropic\tk=2 l=1 q=2\t39\t39\ttrue"), std::string::npos);
}

TEST(CliBinary, OutputFile) {
  auto path = std::filesystem::temp_directory_path() / "mixid_test_out.json";
  std::filesystem::remove(path);
  auto r = run_cli("polytest --q 5 --trials 20 --out " + path.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  auto doc = json::parse(in);
  EXPECT_EQ(doc["status"], "complete");
  EXPECT_EQ(doc["spec"], "PSL 2 5");
}

TEST(CliBinary, OrthogonalKernelCheck) {
  auto r = run_cli("verify --catalog so --m 3 --q 3");
  EXPECT_EQ(r.code, 0);
  auto doc = json::parse(r.out);
  EXPECT_EQ(doc["group_order"], 51840);
  EXPECT_TRUE(doc["kernel_check"]["holds"].get<bool>());
}

TEST(CliBinary, BadInput) {
  EXPECT_EQ(run_cli("verify --word-file /nonexistent/words.txt").code, 4);
  EXPECT_NE(run_cli("frobnicate").code, 0);
}
