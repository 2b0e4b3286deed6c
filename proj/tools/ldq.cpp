#include <CLI11.hpp>

#include <csignal>
#include <iostream>
#include <sstream>

#include "app/app.hpp"
#include "ldq/error.hpp"

namespace {

ldq::app::ApiService* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace ldq::app;

  CLI::App app{"ldq: Linked Data quality assessment, metadata and ranking"};
  app.require_subcommand(1);

  AssessConfig assess;
  std::string input, endpoint, taxonomy, metrics, vocab_dir, out_dir;
  auto* cmd_a = app.add_subcommand("assess", "Assess a dataset and append quality metadata to a store");
  auto* in_opt = cmd_a->add_option("--input", input, "N-Triples dump file");
  auto* ep_opt = cmd_a->add_option("--endpoint", endpoint, "SPARQL endpoint URL");
  in_opt->excludes(ep_opt);
  cmd_a->add_option("--dataset-iri", assess.dataset_iri, "IRI naming the dataset")->required();
  cmd_a->add_option("--taxonomy", taxonomy, "Taxonomy/binding JSON (default: bundled)");
  cmd_a->add_option("--metrics", metrics, "Comma-separated metric IRIs (default: all)");
  cmd_a->add_option("--out", out_dir, "Metadata store directory")->required();
  cmd_a->add_flag("--sample", assess.sample, "Use sampling estimators");
  cmd_a->add_option("--vocab-dir", vocab_dir, "Directory of vocabulary N-Triples files");
  cmd_a->add_option("--page-size", assess.page_size, "SPARQL page size");
  cmd_a->add_option("--seed", assess.seed, "Seed for sampling");

  RankConfig rank;
  std::string rank_taxonomy, rank_output;
  auto* cmd_r = app.add_subcommand("rank", "Rank the datasets of a store");
  cmd_r->add_option("--store", rank.store, "Metadata store directory")->required();
  cmd_r->add_option("--weights", rank.weights, "Weight JSON file")->required();
  cmd_r->add_option("--taxonomy", rank_taxonomy, "Taxonomy JSON");
  cmd_r->add_option("--output", rank_output, "Where to write ranking.json");

  std::filesystem::path serve_store;
  std::string serve_taxonomy, static_dir, host = "127.0.0.1";
  int port = 8080;
  auto* cmd_s = app.add_subcommand("serve", "Serve the JSON API over a store");
  cmd_s->add_option("--store", serve_store, "Metadata store directory")->required();
  cmd_s->add_option("--taxonomy", serve_taxonomy, "Taxonomy JSON");
  cmd_s->add_option("--host", host, "Bind address");
  cmd_s->add_option("--port", port, "Port");
  cmd_s->add_option("--static", static_dir, "Directory of static UI assets");

  std::filesystem::path lqml_file;
  auto* cmd_l = app.add_subcommand("lqml", "LQML utilities");
  cmd_l->require_subcommand(1);
  auto* cmd_lc = cmd_l->add_subcommand("check", "Parse an LQML file and print its AST as JSON");
  cmd_lc->add_option("file", lqml_file, "LQML file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  if (*cmd_a) {
    if (!input.empty()) assess.input = input;
    if (!endpoint.empty()) assess.endpoint = endpoint;
    if (!taxonomy.empty()) assess.taxonomy = taxonomy;
    if (!vocab_dir.empty()) assess.vocab_dir = vocab_dir;
    assess.metrics = split_csv(metrics);
    assess.out = out_dir;
    return cmd_assess(assess, std::cout, std::cerr);
  }
  if (*cmd_r) {
    if (!rank_taxonomy.empty()) rank.taxonomy = rank_taxonomy;
    if (!rank_output.empty()) rank.output = rank_output;
    return cmd_rank(rank, std::cout, std::cerr);
  }
  if (*cmd_lc) return cmd_lqml_check(lqml_file, std::cout, std::cerr);

  try {
    std::optional<std::filesystem::path> tax;
    if (!serve_taxonomy.empty()) tax = serve_taxonomy;
    std::optional<std::filesystem::path> assets;
    if (!static_dir.empty()) assets = static_dir;
    ApiService service(serve_store, resolve_taxonomy(tax, serve_store), assets);
    g_service = &service;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cerr << "serving " << serve_store.string() << " on http://" << host << ":" << port << "\n";
    const bool ok = service.listen(host, port);
    g_service = nullptr;
    if (!ok) {
      std::cerr << "ldq serve: cannot listen on " << host << ":" << port << "\n";
      return kPipelineFailure;
    }
    return kOk;
  } catch (const ldq::Error& e) {
    std::cerr << "ldq serve: " << ldq::to_string(e.code()) << ": " << e.what() << "\n";
    return kConfigError;
  }
}
