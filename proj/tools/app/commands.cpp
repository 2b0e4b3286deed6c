#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "app.hpp"
#include "ldq/error.hpp"
#include "ldq/lqml/functions.hpp"
#include "ldq/lqml/parser.hpp"
#include "ldq/metadata.hpp"
#include "ldq/metrics.hpp"
#include "ldq/probe.hpp"
#include "ldq/ranking.hpp"
#include "ldq/stream.hpp"
#include "ldq/vocab_store.hpp"

#ifndef LDQ_DEFAULT_VOCAB_DIR
#define LDQ_DEFAULT_VOCAB_DIR ""
#endif

namespace ldq::app {

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::invalid_config, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::source_unreadable, "cannot write " + path.string());
  out << text;
}

std::string short_name(const std::string& iri) {
  auto cut = iri.find_last_of("#/");
  return cut == std::string::npos ? iri : iri.substr(cut + 1);
}

bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_config:
    case ErrorCode::unknown_builtin:
    case ErrorCode::lqml_error:
    case ErrorCode::orphan_metric:
    case ErrorCode::duplicate_iri:
    case ErrorCode::empty_dimension:
    case ErrorCode::empty_category:
    case ErrorCode::invalid_weight:
    case ErrorCode::invalid_weight_target:
    case ErrorCode::invalid_page_size:
      return true;
    default:
      return false;
  }
}

struct PreparedAssessment {
  Taxonomy taxonomy;
  std::string taxonomy_json;
  DatasetSource source;
  std::vector<std::unique_ptr<MetricInstance>> instances;
};

PreparedAssessment prepare(const AssessConfig& config, std::shared_ptr<HttpClient> http) {
  if (config.input.has_value() == config.endpoint.has_value()) {
    throw Error(ErrorCode::invalid_config, "give exactly one of --input and --endpoint");
  }
  if (config.dataset_iri.empty() || !is_valid_iri_text(config.dataset_iri) ||
      config.dataset_iri.find(':') == std::string::npos) {
    throw Error(ErrorCode::invalid_config, "--dataset-iri must be an absolute IRI");
  }
  if (config.out.empty()) throw Error(ErrorCode::invalid_config, "--out is required");

  PreparedAssessment prepared;
  if (config.input) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(*config.input, ec)) {
      throw Error(ErrorCode::invalid_config, "input file not found: " + config.input->string());
    }
    prepared.source = DumpFile{*config.input};
  } else {
    Endpoint endpoint;
    endpoint.url = *config.endpoint;
    endpoint.page_size = config.page_size;
    if (endpoint.page_size == 0 || endpoint.page_size > endpoint.truncation_limit) {
      throw Error(ErrorCode::invalid_page_size, "page size must be between 1 and " +
                                                    std::to_string(endpoint.truncation_limit));
    }
    prepared.source = endpoint;
  }

  if (config.taxonomy) {
    prepared.taxonomy_json = read_text(*config.taxonomy);
    prepared.taxonomy = load_taxonomy(prepared.taxonomy_json, config.taxonomy->parent_path());
  } else {
    prepared.taxonomy_json = std::string(default_taxonomy_json());
    prepared.taxonomy = default_taxonomy();
  }

  std::vector<std::string> selected = config.metrics;
  if (selected.empty()) selected = prepared.taxonomy.metric_iris();
  std::set<std::string> unique;
  for (const auto& iri : selected) {
    if (!prepared.taxonomy.descriptor(iri)) {
      throw Error(ErrorCode::invalid_config, "metric <" + iri + "> is not in the taxonomy");
    }
    if (!unique.insert(iri).second) {
      throw Error(ErrorCode::invalid_config, "metric <" + iri + "> selected twice");
    }
  }

  InstantiationContext ctx;
  ctx.dataset_iri = config.dataset_iri;
  ctx.sampling = config.sample;
  ctx.seed = config.seed;
  ctx.prober = std::make_shared<ResourceProber>(http);
  std::filesystem::path vocab_dir = config.vocab_dir.value_or(LDQ_DEFAULT_VOCAB_DIR);
  std::error_code ec;
  if (config.vocab_dir || (!vocab_dir.empty() && std::filesystem::is_directory(vocab_dir, ec))) {
    ctx.vocabulary = std::make_shared<const VocabularyStore>(VocabularyStore::load_directory(vocab_dir));
  }
  if (config.taxonomy) ctx.base_dir = config.taxonomy->parent_path();

  // Every binding is resolved before a single triple is read.
  for (const auto& iri : selected) {
    prepared.instances.push_back(instantiate(*prepared.taxonomy.binding(iri),
                                             *prepared.taxonomy.descriptor(iri),
                                             MetricRegistry::builtins(), ctx));
  }
  return prepared;
}

void print_summary(std::ostream& out, const Taxonomy& taxonomy, const AssessmentRun& run,
                   const std::vector<std::unique_ptr<MetricInstance>>& instances) {
  out << "dataset   " << run.dataset_iri << "\n";
  out << "triples   " << run.total_triples;
  if (!run.parse_errors.empty()) out << " (" << run.parse_errors.size() << " malformed lines skipped)";
  out << "\n\n";
  out << std::left << std::setw(42) << "metric" << std::setw(14) << "value" << std::setw(10)
      << "problems" << "warnings\n";
  for (const auto& m : instances) {
    const auto* d = taxonomy.descriptor(m->metric_iri());
    std::string label = d && !d->label.empty() ? d->label : short_name(m->metric_iri());
    if (label.size() > 40) label = label.substr(0, 37) + "...";
    const auto value = format_value(m->value());
    out << std::left << std::setw(42) << label << value << std::string(value.size() < 14 ? 14 - value.size() : 1, ' ')
        << std::setw(10) << m->problems().size() << m->warnings().size() << "\n";
  }
}

}  // namespace

int cmd_assess(const AssessConfig& config, std::ostream& out, std::ostream& err) {
  auto http = config.http;
  if (!http) {
    HttpClientOptions options;
    options.timeout = config.http_timeout;
    http = std::make_shared<BasicHttpClient>(options);
  }

  PreparedAssessment prepared;
  try {
    prepared = prepare(config, http);
  } catch (const Error& e) {
    err << "ldq assess: " << to_string(e.code()) << ": " << e.what() << "\n";
    return is_config_error(e.code()) ? kConfigError : kPipelineFailure;
  }

  try {
    std::vector<MetricInstance*> sinks;
    for (auto& m : prepared.instances) sinks.push_back(m.get());
    StreamOptions options;
    options.dataset_iri = config.dataset_iri;
    options.http = http;
    const auto run = stream_dataset(prepared.source, sinks, options);

    std::vector<const MetricInstance*> done(sinks.begin(), sinks.end());
    const auto observations = make_observations(run, done);
    const auto report = make_report(run, done);
    MetadataStore store(config.out);
    store.append(observations, report);
    write_text(config.out / "taxonomy.json", prepared.taxonomy_json);

    for (const auto& e : run.parse_errors) {
      err << "line " << e.line << ": " << e.message << "\n";
    }
    for (const auto& m : prepared.instances) {
      for (const auto& w : m->warnings()) err << short_name(m->metric_iri()) << ": " << w << "\n";
    }
    print_summary(out, prepared.taxonomy, run, prepared.instances);
    const auto slug = dataset_slug(config.dataset_iri);
    out << "\nwrote " << (config.out / (slug + ".quality.nt")).string() << "\n"
        << "wrote " << (config.out / (slug + ".problems.nt")).string() << "\n";
    return kOk;
  } catch (const Error& e) {
    err << "ldq assess: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kPipelineFailure;
  } catch (const std::exception& e) {
    err << "ldq assess: " << e.what() << "\n";
    return kPipelineFailure;
  }
}

Taxonomy resolve_taxonomy(const std::optional<std::filesystem::path>& explicit_path,
                          const std::filesystem::path& store) {
  if (explicit_path) return load_taxonomy_file(*explicit_path);
  std::error_code ec;
  if (const auto saved = store / "taxonomy.json"; std::filesystem::is_regular_file(saved, ec)) {
    return load_taxonomy_file(saved);
  }
  return default_taxonomy();
}

int cmd_rank(const RankConfig& config, std::ostream& out, std::ostream& err) {
  RankedResult result;
  try {
    std::error_code ec;
    if (!std::filesystem::is_directory(config.store, ec)) {
      throw Error(ErrorCode::invalid_config, "store directory not found: " + config.store.string());
    }
    const auto taxonomy = resolve_taxonomy(config.taxonomy, config.store);
    const auto weights = parse_weight_config(read_text(config.weights));
    validate_weights(weights, taxonomy);
    MetadataStore store(config.store);
    store.load();
    result = rank_datasets(store, taxonomy, weights);
    write_text(config.output.value_or(config.store / "ranking.json"), to_json(result));
  } catch (const Error& e) {
    err << "ldq rank: " << to_string(e.code()) << ": " << e.what() << "\n";
    return is_config_error(e.code()) ? kConfigError : kPipelineFailure;
  }

  for (const auto& w : result.warnings) err << "warning: " << w << "\n";
  out << std::left << std::setw(6) << "rank" << std::setw(48) << "dataset" << std::setw(22) << "total"
      << "top contributor\n";
  std::size_t rank = 0;
  for (const auto& e : result.entries) {
    std::ostringstream total;
    total << std::setprecision(17) << e.total;
    const auto* top = e.top_contributor();
    out << std::left << std::setw(6) << ++rank << std::setw(48) << e.dataset_iri << std::setw(22)
        << total.str() << (top && top->value > 0 ? short_name(top->node_iri) : "-") << "\n";
  }
  return kOk;
}

int cmd_lqml_check(const std::filesystem::path& file, std::ostream& out, std::ostream& err) {
  try {
    const auto def = lqml::parse_lqml(read_text(file), lqml::FunctionRegistry::with_builtins());
    out << lqml::to_json(def) << "\n";
    return kOk;
  } catch (const lqml::ParseError& e) {
    err << file.string() << ":" << e.what() << "\n";
  } catch (const Error& e) {
    err << file.string() << ": " << to_string(e.code()) << ": " << e.what() << "\n";
  }
  return kConfigError;
}

}  // namespace ldq::app
