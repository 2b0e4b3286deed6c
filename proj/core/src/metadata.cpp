#include "ldq/metadata.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <unordered_map>

#include "ldq/error.hpp"
#include "ldq/ntriples.hpp"
#include "ldq/stream.hpp"

namespace ldq {

namespace {

using vocab::term;

struct Terms {
  std::string daq_observation = term(vocab::daq, "Observation");
  std::string daq_computed_on = term(vocab::daq, "computedOn");
  std::string daq_metric = term(vocab::daq, "metric");
  std::string daq_value = term(vocab::daq, "value");
  std::string daq_observed_at = term(vocab::daq, "observedAt");
  std::string daq_graph = term(vocab::daq, "graph");
  std::string qpro_report = term(vocab::qpro, "QualityReport");
  std::string qpro_problem = term(vocab::qpro, "QualityProblem");
  std::string qpro_computed_on = term(vocab::qpro, "computedOn");
  std::string qpro_has_problem = term(vocab::qpro, "hasProblem");
  std::string qpro_described_by = term(vocab::qpro, "isDescribedBy");
  std::string qpro_thing = term(vocab::qpro, "problematicThing");
  std::string qpro_in_graph = term(vocab::qpro, "inGraph");
  std::string rdf_seq = term(vocab::rdf, "Seq");
  std::string rdf_statement = term(vocab::rdf, "Statement");
  std::string rdf_subject = term(vocab::rdf, "subject");
  std::string rdf_predicate = term(vocab::rdf, "predicate");
  std::string rdf_object = term(vocab::rdf, "object");
  std::string rdfs_comment = term(vocab::rdfs, "comment");
  std::string xsd_double = term(vocab::xsd, "double");
  std::string xsd_decimal = term(vocab::xsd, "decimal");
  std::string xsd_float = term(vocab::xsd, "float");
  std::string xsd_boolean = term(vocab::xsd, "boolean");
  std::string xsd_integer = term(vocab::xsd, "integer");
  std::string xsd_long = term(vocab::xsd, "long");
  std::string xsd_int = term(vocab::xsd, "int");
  std::string xsd_date_time = term(vocab::xsd, "dateTime");
};

const Terms& T() {
  static const Terms terms;
  return terms;
}

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string rdf_member(std::size_t n) { return term(vocab::rdf, "_" + std::to_string(n)); }

std::optional<std::size_t> member_index(std::string_view predicate) {
  static const std::string prefix = term(vocab::rdf, "_");
  if (predicate.substr(0, prefix.size()) != prefix) return std::nullopt;
  std::size_t n = 0;
  auto digits = predicate.substr(prefix.size());
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || n == 0) return std::nullopt;
  return n;
}

RdfTerm value_literal(const MetricValue& value) {
  switch (value.kind()) {
    case ValueKind::boolean: return RdfTerm::typed_literal(format_value(value), T().xsd_boolean);
    case ValueKind::count: return RdfTerm::typed_literal(format_value(value), T().xsd_integer);
    case ValueKind::real: break;
  }
  return RdfTerm::typed_literal(format_value(value), T().xsd_double);
}

std::optional<MetricValue> parse_value(const RdfTerm& literal) {
  if (!literal.is_literal()) return std::nullopt;
  const auto& lex = literal.value();
  const auto type = literal.datatype();
  if (type == T().xsd_boolean) {
    if (lex == "true" || lex == "1") return MetricValue::boolean(true);
    if (lex == "false" || lex == "0") return MetricValue::boolean(false);
    return std::nullopt;
  }
  if (type == T().xsd_integer || type == T().xsd_long || type == T().xsd_int) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(lex.data(), lex.data() + lex.size(), v);
    if (ec != std::errc{} || ptr != lex.data() + lex.size()) return std::nullopt;
    return MetricValue::count(v);
  }
  if (type == T().xsd_double || type == T().xsd_decimal || type == T().xsd_float) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(lex.data(), lex.data() + lex.size(), v);
    if (ec != std::errc{} || ptr != lex.data() + lex.size()) return std::nullopt;
    return MetricValue::real(v);
  }
  return std::nullopt;
}

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::malformed_metadata, what); }

Triple make(const std::string& s, const std::string& p, RdfTerm o) {
  return Triple{RdfTerm::iri(s), RdfTerm::iri(p), std::move(o)};
}

}  // namespace

std::string observation_iri(const Observation& o) {
  const auto key = o.dataset_iri + '\n' + o.metric_iri + '\n' + format_timestamp(o.observed_at) + '\n' +
                   o.graph_iri.value_or("");
  return "urn:ldq:observation:" + hex16(stable_hash(key));
}

std::string report_iri(std::string_view dataset_iri, Timestamp generated_at) {
  char stamp[24];
  std::snprintf(stamp, sizeof stamp, "%020lld",
                static_cast<long long>(generated_at.time_since_epoch().count()));
  return "urn:ldq:report:" + hex16(stable_hash(dataset_iri)) + ":" + stamp;
}

std::string emit_observations(std::span<const Observation> observations) {
  std::vector<Triple> triples;
  for (const auto& o : observations) {
    const auto node = observation_iri(o);
    triples.push_back(make(node, vocab::rdf_type, RdfTerm::iri(T().daq_observation)));
    triples.push_back(make(node, T().daq_computed_on, RdfTerm::iri(o.dataset_iri)));
    triples.push_back(make(node, T().daq_metric, RdfTerm::iri(o.metric_iri)));
    triples.push_back(make(node, T().daq_value, value_literal(o.value)));
    triples.push_back(make(node, T().daq_observed_at,
                           RdfTerm::typed_literal(format_timestamp(o.observed_at), T().xsd_date_time)));
    if (o.graph_iri) triples.push_back(make(node, T().daq_graph, RdfTerm::iri(*o.graph_iri)));
  }
  return to_canonical_ntriples(triples);
}

std::string emit_report(const QualityReport& report) {
  std::vector<Triple> triples;
  const auto& r = report.iri;
  triples.push_back(make(r, vocab::rdf_type, RdfTerm::iri(T().qpro_report)));
  triples.push_back(make(r, T().qpro_computed_on, RdfTerm::iri(report.computed_on)));
  for (std::size_t i = 0; i < report.problems.size(); ++i) {
    const auto& problem = report.problems[i];
    char suffix[24];
    std::snprintf(suffix, sizeof suffix, ":problem:%09zu", i + 1);
    const auto p = r + suffix;
    const auto seq = p + ":thing";
    triples.push_back(make(r, T().qpro_has_problem, RdfTerm::iri(p)));
    triples.push_back(make(p, vocab::rdf_type, RdfTerm::iri(T().qpro_problem)));
    triples.push_back(make(p, T().qpro_described_by, RdfTerm::iri(problem.described_by)));
    triples.push_back(make(p, T().qpro_thing, RdfTerm::iri(seq)));
    if (problem.in_graph) triples.push_back(make(p, T().qpro_in_graph, RdfTerm::iri(*problem.in_graph)));
    if (!problem.note.empty()) triples.push_back(make(p, T().rdfs_comment, RdfTerm::literal(problem.note)));
    triples.push_back(make(seq, vocab::rdf_type, RdfTerm::iri(T().rdf_seq)));
    if (const auto* resources = std::get_if<ResourceList>(&problem.thing)) {
      for (std::size_t k = 0; k < resources->size(); ++k) {
        triples.push_back(make(seq, rdf_member(k + 1), (*resources)[k]));
      }
    } else {
      const auto& statements = std::get<ReifiedStatements>(problem.thing);
      for (std::size_t k = 0; k < statements.size(); ++k) {
        const auto st = seq + ":" + std::to_string(k + 1);
        triples.push_back(make(seq, rdf_member(k + 1), RdfTerm::iri(st)));
        triples.push_back(make(st, vocab::rdf_type, RdfTerm::iri(T().rdf_statement)));
        triples.push_back(make(st, T().rdf_subject, statements[k].subject));
        triples.push_back(make(st, T().rdf_predicate, statements[k].predicate));
        triples.push_back(make(st, T().rdf_object, statements[k].object));
      }
    }
  }
  return to_canonical_ntriples(triples);
}

ParsedMetadata parse_metadata(std::string_view ntriples) {
  ParsedMetadata out;
  auto doc = parse_ntriples(ntriples);
  for (const auto& e : doc.errors) {
    malformed("line " + std::to_string(e.line) + ": " + e.message);
  }

  std::map<RdfTerm, std::vector<const Triple*>> by_subject;
  for (const auto& t : doc.triples) by_subject[t.subject].push_back(&t);
  auto objects = [&](const RdfTerm& s, const std::string& p) {
    std::vector<RdfTerm> found;
    if (auto it = by_subject.find(s); it != by_subject.end()) {
      for (const auto* t : it->second) {
        if (t->predicate.value() == p) found.push_back(t->object);
      }
    }
    return found;
  };
  auto single = [&](const RdfTerm& s, const std::string& p) -> std::optional<RdfTerm> {
    auto found = objects(s, p);
    if (found.empty()) return std::nullopt;
    return found.front();
  };
  auto typed = [&](const std::string& cls) {
    std::vector<RdfTerm> nodes;
    for (const auto& [s, ts] : by_subject) {
      for (const auto* t : ts) {
        if (t->predicate.value() == vocab::rdf_type && t->object.is_iri() && t->object.value() == cls) {
          nodes.push_back(s);
          break;
        }
      }
    }
    return nodes;
  };

  const std::set<std::string> observation_props{vocab::rdf_type,   T().daq_computed_on, T().daq_metric,
                                                T().daq_value,     T().daq_observed_at, T().daq_graph};
  for (const auto& node : typed(T().daq_observation)) {
    const auto name = to_ntriples(node);
    auto dataset = single(node, T().daq_computed_on);
    auto metric = single(node, T().daq_metric);
    auto value = single(node, T().daq_value);
    auto when = single(node, T().daq_observed_at);
    if (!dataset || !dataset->is_iri()) malformed("observation " + name + " has no dataset");
    if (!metric || !metric->is_iri()) malformed("observation " + name + " has no metric");
    if (!value) malformed("observation " + name + " has no value");
    if (!when) malformed("observation " + name + " has no timestamp");
    Observation o;
    o.dataset_iri = dataset->value();
    o.metric_iri = metric->value();
    auto parsed_value = parse_value(*value);
    if (!parsed_value) malformed("observation " + name + " has an unreadable value " + to_ntriples(*value));
    o.value = *parsed_value;
    auto ts = parse_timestamp(when->value());
    if (!ts) malformed("observation " + name + " has an unreadable timestamp");
    o.observed_at = *ts;
    if (auto g = single(node, T().daq_graph)) o.graph_iri = g->value();
    for (const auto* t : by_subject[node]) {
      if (!observation_props.count(t->predicate.value())) {
        out.warnings.push_back("ignored " + to_ntriples(t->predicate) + " on observation " + name);
      }
    }
    out.observations.push_back(std::move(o));
  }
  std::sort(out.observations.begin(), out.observations.end(), [](const auto& a, const auto& b) {
    return std::tie(a.dataset_iri, a.metric_iri, a.observed_at, a.graph_iri) <
           std::tie(b.dataset_iri, b.metric_iri, b.observed_at, b.graph_iri);
  });

  for (const auto& node : typed(T().qpro_report)) {
    QualityReport report;
    report.iri = node.value();
    auto computed_on = single(node, T().qpro_computed_on);
    if (!computed_on) malformed("report " + to_ntriples(node) + " has no qpro:computedOn");
    report.computed_on = computed_on->value();
    auto problem_nodes = objects(node, T().qpro_has_problem);
    std::sort(problem_nodes.begin(), problem_nodes.end());
    for (const auto& p : problem_nodes) {
      QualityProblem problem;
      auto metric = single(p, T().qpro_described_by);
      if (!metric) malformed("problem " + to_ntriples(p) + " has no qpro:isDescribedBy");
      problem.described_by = metric->value();
      if (auto g = single(p, T().qpro_in_graph)) problem.in_graph = g->value();
      if (auto c = single(p, T().rdfs_comment)) problem.note = c->value();
      auto seq = single(p, T().qpro_thing);
      if (!seq) malformed("problem " + to_ntriples(p) + " has no qpro:problematicThing");

      std::map<std::size_t, RdfTerm> members;
      for (const auto* t : by_subject[*seq]) {
        if (auto n = member_index(t->predicate.value())) members.emplace(*n, t->object);
      }
      if (members.empty()) malformed("problem " + to_ntriples(p) + " has an empty problematic thing");
      auto is_statement = [&](const RdfTerm& m) {
        for (const auto& type : objects(m, vocab::rdf_type)) {
          if (type.is_iri() && type.value() == T().rdf_statement) return true;
        }
        return false;
      };
      if (is_statement(members.begin()->second)) {
        ReifiedStatements statements;
        for (const auto& [_, m] : members) {
          auto s = single(m, T().rdf_subject);
          auto pr = single(m, T().rdf_predicate);
          auto o = single(m, T().rdf_object);
          if (!s || !pr || !o) malformed("incomplete reified statement " + to_ntriples(m));
          statements.push_back(Triple{*s, *pr, *o});
        }
        problem.thing = std::move(statements);
      } else {
        ResourceList resources;
        for (const auto& [_, m] : members) resources.push_back(m);
        problem.thing = std::move(resources);
      }
      report.problems.push_back(std::move(problem));
    }
    out.reports.push_back(std::move(report));
  }
  std::sort(out.reports.begin(), out.reports.end(),
            [](const auto& a, const auto& b) { return a.iri < b.iri; });
  return out;
}

std::vector<Observation> make_observations(const AssessmentRun& run,
                                           std::span<const MetricInstance* const> instances,
                                           std::optional<std::string> graph_iri) {
  std::vector<Observation> out;
  for (const auto* m : instances) {
    out.push_back(Observation{run.dataset_iri, m->metric_iri(), m->value(), run.finished_at, graph_iri});
  }
  return out;
}

QualityReport make_report(const AssessmentRun& run, std::span<const MetricInstance* const> instances,
                          std::optional<std::string> graph_iri) {
  QualityReport report;
  report.iri = report_iri(run.dataset_iri, run.finished_at);
  report.computed_on = run.dataset_iri;
  for (const auto* m : instances) {
    // (note, is-statement) -> index into report.problems
    std::map<std::pair<std::string, bool>, std::size_t> groups;
    for (const auto& item : m->problems()) {
      const bool statement = std::holds_alternative<ReifiedStatements>(item.thing);
      auto [it, inserted] = groups.try_emplace({item.note, statement}, report.problems.size());
      if (inserted) {
        QualityProblem p;
        p.described_by = m->metric_iri();
        p.in_graph = graph_iri;
        p.note = item.note;
        if (statement) p.thing = ReifiedStatements{};
        report.problems.push_back(std::move(p));
      }
      auto& thing = report.problems[it->second].thing;
      if (statement) {
        const auto& src = std::get<ReifiedStatements>(item.thing);
        auto& dst = std::get<ReifiedStatements>(thing);
        dst.insert(dst.end(), src.begin(), src.end());
      } else {
        const auto& src = std::get<ResourceList>(item.thing);
        auto& dst = std::get<ResourceList>(thing);
        dst.insert(dst.end(), src.begin(), src.end());
      }
    }
  }
  return report;
}

std::string dataset_slug(std::string_view dataset_iri) {
  auto rest = dataset_iri;
  if (auto scheme = rest.find("://"); scheme != std::string_view::npos) rest.remove_prefix(scheme + 3);
  std::string slug;
  for (char c : rest) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      slug.push_back(static_cast<char>(std::tolower(u)));
    } else if (!slug.empty() && slug.back() != '-') {
      slug.push_back('-');
    }
    if (slug.size() >= 48) break;
  }
  while (!slug.empty() && slug.back() == '-') slug.pop_back();
  if (slug.empty()) slug = "dataset";
  return slug + "-" + hex16(stable_hash(dataset_iri)).substr(0, 8);
}

MetadataStore::MetadataStore(std::filesystem::path directory) : directory_(std::move(directory)) {
  std::filesystem::create_directories(directory_);
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void append_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::source_unreadable, "cannot write " + path.string());
  out << text;
}

}  // namespace

void MetadataStore::load() {
  if (directory_.empty()) return;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory_)) {
    const auto name = entry.path().filename().string();
    if (name.size() > 11 && name.ends_with(".quality.nt")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::unique_lock lock(mutex_);
  by_dataset_.clear();
  for (const auto& file : files) {
    ParsedMetadata parsed;
    try {
      parsed = parse_metadata(read_file(file));
    } catch (const Error& e) {
      throw Error(ErrorCode::malformed_metadata, file.string() + ": " + e.what());
    }
    for (const auto& o : parsed.observations) index(o, nullptr);
  }
}

void MetadataStore::index(const Observation& observation, std::vector<Observation>* added) {
  auto& history = by_dataset_[observation.dataset_iri][observation.metric_iri];
  const auto pos = std::lower_bound(
      history.begin(), history.end(), observation,
      [](const Observation& a, const Observation& b) { return a.observed_at < b.observed_at; });
  if (pos != history.end() && pos->observed_at == observation.observed_at) return;
  history.insert(pos, observation);
  if (added) added->push_back(observation);
}

void MetadataStore::append(std::span<const Observation> observations,
                           const std::optional<QualityReport>& report) {
  std::unique_lock lock(mutex_);
  std::vector<Observation> added;
  for (const auto& o : observations) index(o, &added);
  if (directory_.empty()) {
    if (report) memory_reports_[report->computed_on].push_back(*report);
    return;
  }
  std::map<std::string, std::vector<Observation>> per_dataset;
  for (auto& o : added) per_dataset[o.dataset_iri].push_back(std::move(o));
  for (const auto& [dataset, obs] : per_dataset) {
    append_file(directory_ / (dataset_slug(dataset) + ".quality.nt"), emit_observations(obs));
  }
  if (report) {
    append_file(directory_ / (dataset_slug(report->computed_on) + ".problems.nt"), emit_report(*report));
  }
}

std::vector<std::string> MetadataStore::datasets() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [dataset, _] : by_dataset_) out.push_back(dataset);
  return out;
}

bool MetadataStore::contains(std::string_view dataset_iri) const {
  std::shared_lock lock(mutex_);
  return by_dataset_.find(dataset_iri) != by_dataset_.end();
}

std::optional<std::string> MetadataStore::resolve(std::string_view slug_or_iri) const {
  std::shared_lock lock(mutex_);
  if (by_dataset_.find(slug_or_iri) != by_dataset_.end()) return std::string(slug_or_iri);
  for (const auto& [dataset, _] : by_dataset_) {
    if (dataset_slug(dataset) == slug_or_iri) return dataset;
  }
  return std::nullopt;
}

const MetadataStore::History& MetadataStore::history(std::string_view dataset_iri) const {
  auto it = by_dataset_.find(dataset_iri);
  if (it == by_dataset_.end()) {
    throw Error(ErrorCode::unknown_dataset, "no observations for <" + std::string(dataset_iri) + ">");
  }
  return it->second;
}

std::map<std::string, MetricValue> MetadataStore::latest_values(std::string_view dataset_iri) const {
  std::shared_lock lock(mutex_);
  std::map<std::string, MetricValue> out;
  for (const auto& [metric, obs] : history(dataset_iri)) out.emplace(metric, obs.back().value);
  return out;
}

std::optional<Observation> MetadataStore::latest(std::string_view dataset_iri,
                                                 std::string_view metric_iri) const {
  std::shared_lock lock(mutex_);
  auto d = by_dataset_.find(dataset_iri);
  if (d == by_dataset_.end()) return std::nullopt;
  auto m = d->second.find(metric_iri);
  if (m == d->second.end()) return std::nullopt;
  return m->second.back();
}

std::vector<Observation> MetadataStore::observations(std::string_view dataset_iri) const {
  std::shared_lock lock(mutex_);
  std::vector<Observation> out;
  for (const auto& [_, obs] : history(dataset_iri)) out.insert(out.end(), obs.begin(), obs.end());
  return out;
}

std::vector<QualityReport> MetadataStore::reports(std::string_view dataset_iri) const {
  std::shared_lock lock(mutex_);
  history(dataset_iri);
  if (directory_.empty()) {
    auto it = memory_reports_.find(dataset_iri);
    return it == memory_reports_.end() ? std::vector<QualityReport>{} : it->second;
  }
  const auto text = read_file(directory_ / (dataset_slug(dataset_iri) + ".problems.nt"));
  return parse_metadata(text).reports;
}

}  // namespace ldq
