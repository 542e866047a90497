#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mixid/cli.hpp"

namespace {

using mixid::cli::RunConfig;

void common_flags(CLI::App* sub, RunConfig& c) {
  sub->add_option("--spec", c.spec, "group spec, e.g. \"PSL 2 5\", \"Sp 4 3\", \"S 3\"");
  sub->add_option("--constants-spec", c.constants_spec, "group the constants live in (default: --spec)");
  sub->add_option("--catalog", c.catalog, "catalog entry: psl, sl2-law, frobenius, sp, so, su, alternating");
  sub->add_option("--word-file", c.word_file, "one word per line, optional '# spec: ...' header");
  sub->add_option("--n", c.n, "matrix dimension or permutation degree");
  sub->add_option("--m", c.m, "half dimension for Sp/SO");
  sub->add_option("--q", c.q, "field order");
  sub->add_option("--frob", c.frob, "Frobenius exponent f");
  sub->add_option("--mode", c.mode, "exhaustive or sampled")->check(CLI::IsMember({"exhaustive", "sampled"}));
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--samples", c.samples, "sample count in sampled mode");
  sub->add_option("--trials", c.trials, "random instances for count and polytest");
  sub->add_option("--budget-enum", c.budget_enum, "enumeration budget (elements)");
  sub->add_option("--budget-tuples", c.budget_tuples, "tuple-scan budget (evaluations)");
  sub->add_option("--budget-words", c.budget_words, "word-scan budget (multiplications)");
  sub->add_option("--threads", c.threads, "worker threads");
  sub->add_option("--out", c.out, "write the report here instead of stdout");
  sub->add_option("--format", c.format, "json or tsv")->check(CLI::IsMember({"json", "tsv"}));
  sub->add_flag("!--no-timing", c.timing, "omit wall time so reruns are byte-identical");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed identities in finite classical groups"};
  app.set_version_flag("--version", std::string(mixid::cli::kVersion));
  app.require_subcommand(1);
  RunConfig cfg;

  auto* catalog = app.add_subcommand("catalog", "list catalog identities or print one recipe");
  auto* verify = app.add_subcommand("verify", "check words or catalog identities by evaluation");
  auto* certify = app.add_subcommand("certify", "certify words as non-constant maps");
  auto* search = app.add_subcommand("search", "shortest one-variable mixed identity of a small group");
  auto* count = app.add_subcommand("count", "brute-force counts against closed forms");
  auto* polytest = app.add_subcommand("polytest", "polynomial embedding checks over PSL 2 q");
  for (auto* s : {catalog, verify, certify, search, count, polytest}) common_flags(s, cfg);
  search->add_option("--max-len", cfg.max_len, "longest word length to scan");
  search->add_flag("--unnormalized", cfg.unnormalized, "scan every word without normalization");
  count->add_option("--what", cfg.what, "all, involutions, isotropic, fixedpoints, zeros")
      ->check(CLI::IsMember({"all", "involutions", "isotropic", "fixedpoints", "zeros"}));
  count->add_option("--k", cfg.k, "rank of the hermitian form");
  count->add_option("--l", cfg.l, "dimension of the radical");

  CLI11_PARSE(app, argc, argv);
  cfg.command = app.get_subcommands().front()->get_name();

  auto rep = mixid::cli::run(cfg);
  const std::string text = mixid::cli::render(rep, cfg.format);
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.out);
    if (!out) {
      std::cerr << "cannot write " << cfg.out << "\n";
      return mixid::cli::kBadInput;
    }
    out << text;
  }
  if (rep.doc.contains("error")) std::cerr << "mixid: " << rep.doc["error"].get<std::string>() << "\n";
  return rep.exit_code;
}
