#include <httplib.h>

#include <mutex>
#include <nlohmann/json.hpp>
#include <shared_mutex>

#include "app.hpp"
#include "ldq/error.hpp"
#include "ldq/metadata.hpp"
#include "ldq/ranking.hpp"
#include "ldq/time.hpp"

namespace ldq::app {

using nlohmann::json;

namespace {

json value_json(const MetricValue& value) {
  return std::visit([](auto v) { return json(v); }, value.variant());
}

json term_json(const RdfTerm& term) {
  json j{{"value", term.value()}};
  if (term.is_iri()) {
    j["type"] = "iri";
  } else if (term.is_blank()) {
    j["type"] = "blank";
  } else {
    j["type"] = "literal";
    const auto& lit = term.as_literal();
    if (lit.language) j["language"] = *lit.language;
    if (lit.datatype) j["datatype"] = *lit.datatype;
  }
  return j;
}

json taxonomy_json(const Taxonomy& taxonomy) {
  json categories = json::array();
  for (const auto& c : taxonomy.categories()) {
    json dims = json::array();
    for (const auto& d : c.dimensions) {
      json metrics = json::array();
      for (const auto& m : d.metrics) {
        const auto* desc = taxonomy.descriptor(m);
        metrics.push_back({{"iri", m},
                           {"label", desc->label},
                           {"kind", to_string(desc->value_kind)},
                           {"normalized", desc->normalized}});
      }
      dims.push_back({{"iri", d.iri}, {"label", d.label}, {"metrics", std::move(metrics)}});
    }
    categories.push_back({{"iri", c.iri}, {"label", c.label}, {"dimensions", std::move(dims)}});
  }
  return {{"categories", std::move(categories)}};
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::unknown_dataset: return 404;
    case ErrorCode::invalid_config:
    case ErrorCode::invalid_weight:
    case ErrorCode::invalid_weight_target:
    case ErrorCode::missing_observation:
    case ErrorCode::empty_dimension:
    case ErrorCode::empty_category:
      return 422;
    default: return 500;
  }
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(2), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  send_json(res, status, {{"error", {{"status", status}, {"code", code}, {"message", message}}}});
}

// Cheap change detector for the store directory: names, sizes and mtimes of
// the metadata files.
std::string store_signature(const std::filesystem::path& dir) {
  std::string sig;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    const auto name = entry.path().filename().string();
    if (!name.ends_with(".quality.nt")) continue;
    sig += name + ':' + std::to_string(entry.file_size(ec)) + ':' +
           std::to_string(entry.last_write_time(ec).time_since_epoch().count()) + ';';
  }
  return sig;
}

}  // namespace

struct ApiService::Impl {
  std::filesystem::path store_dir;
  Taxonomy taxonomy;
  httplib::Server server;

  std::shared_mutex snapshot_mutex;
  std::shared_ptr<const MetadataStore> snapshot;
  std::string signature;

  std::shared_ptr<const MetadataStore> store() {
    auto current = store_signature(store_dir);
    {
      std::shared_lock lock(snapshot_mutex);
      if (snapshot && current == signature) return snapshot;
    }
    auto fresh = std::make_shared<MetadataStore>(store_dir);
    fresh->load();
    std::unique_lock lock(snapshot_mutex);
    snapshot = std::move(fresh);
    signature = std::move(current);
    return snapshot;
  }

  std::string dataset_for(const MetadataStore& s, const std::string& slug) {
    auto iri = s.resolve(slug);
    if (!iri) throw Error(ErrorCode::unknown_dataset, "no dataset with slug '" + slug + "'");
    return *iri;
  }

  void routes() {
    server.Get("/api/datasets", [this](const httplib::Request&, httplib::Response& res) {
      auto s = store();
      json out = json::array();
      for (const auto& dataset : s->datasets()) {
        json values = json::object();
        std::string latest;
        for (const auto& [metric, value] : s->latest_values(dataset)) {
          values[metric] = value_json(value);
          auto obs = s->latest(dataset, metric);
          latest = std::max(latest, format_timestamp(obs->observed_at));
        }
        out.push_back({{"iri", dataset},
                       {"slug", dataset_slug(dataset)},
                       {"observations", s->observations(dataset).size()},
                       {"last_observed_at", latest},
                       {"latest", std::move(values)}});
      }
      send_json(res, 200, {{"datasets", std::move(out)}});
    });

    server.Get(R"(/api/datasets/([^/]+)/observations)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 auto s = store();
                 const auto dataset = dataset_for(*s, req.matches[1]);
                 json obs = json::array();
                 for (const auto& o : s->observations(dataset)) {
                   const auto* d = taxonomy.descriptor(o.metric_iri);
                   json item{{"metric", o.metric_iri},
                             {"label", d ? d->label : ""},
                             {"kind", to_string(o.value.kind())},
                             {"value", value_json(o.value)},
                             {"observed_at", format_timestamp(o.observed_at)}};
                   if (o.graph_iri) item["graph"] = *o.graph_iri;
                   obs.push_back(std::move(item));
                 }
                 send_json(res, 200,
                           {{"dataset", dataset}, {"slug", dataset_slug(dataset)}, {"observations", obs}});
               });

    server.Get(R"(/api/datasets/([^/]+)/problems)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 auto s = store();
                 const auto dataset = dataset_for(*s, req.matches[1]);
                 json reports = json::array();
                 for (const auto& r : s->reports(dataset)) {
                   json problems = json::array();
                   for (const auto& p : r.problems) {
                     json item{{"metric", p.described_by}, {"note", p.note}};
                     if (p.in_graph) item["graph"] = *p.in_graph;
                     if (const auto* list = std::get_if<ResourceList>(&p.thing)) {
                       json resources = json::array();
                       for (const auto& t : *list) resources.push_back(term_json(t));
                       item["resources"] = std::move(resources);
                     } else {
                       json statements = json::array();
                       for (const auto& t : std::get<ReifiedStatements>(p.thing)) {
                         statements.push_back({{"subject", term_json(t.subject)},
                                               {"predicate", term_json(t.predicate)},
                                               {"object", term_json(t.object)}});
                       }
                       item["statements"] = std::move(statements);
                     }
                     problems.push_back(std::move(item));
                   }
                   reports.push_back({{"iri", r.iri}, {"problems", std::move(problems)}});
                 }
                 send_json(res, 200,
                           {{"dataset", dataset}, {"slug", dataset_slug(dataset)}, {"reports", reports}});
               });

    server.Get("/api/taxonomy", [this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, taxonomy_json(taxonomy));
    });

    server.Post("/api/rank", [this](const httplib::Request& req, httplib::Response& res) {
      const auto weights = parse_weight_config(req.body);
      const auto result = rank_datasets(*store(), taxonomy, weights);
      res.status = 200;
      res.set_content(to_json(result), "application/json");
    });

    server.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          try {
            std::rethrow_exception(ep);
          } catch (const Error& e) {
            send_error(res, status_for(e.code()), to_string(e.code()), e.what());
          } catch (const std::exception& e) {
            send_error(res, 500, "InternalError", e.what());
          } catch (...) {
            send_error(res, 500, "InternalError", "unknown failure");
          }
        });

    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (!res.body.empty()) return;
      if (res.status == 404) {
        send_error(res, 404, "NotFound", "no route for " + req.method + " " + req.path);
      } else if (res.status >= 400) {
        send_error(res, res.status, "HttpError", httplib::status_message(res.status));
      }
    });
  }
};

ApiService::ApiService(std::filesystem::path store_dir, Taxonomy taxonomy,
                       std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>()) {
  impl_->store_dir = std::move(store_dir);
  impl_->taxonomy = std::move(taxonomy);
  std::filesystem::create_directories(impl_->store_dir);
  impl_->routes();
  if (static_dir && !impl_->server.set_mount_point("/", static_dir->string())) {
    throw Error(ErrorCode::invalid_config, "static directory not found: " + static_dir->string());
  }
}

ApiService::~ApiService() { stop(); }

bool ApiService::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

int ApiService::bind_any_port(const std::string& host) { return impl_->server.bind_to_any_port(host); }

bool ApiService::listen_after_bind() { return impl_->server.listen_after_bind(); }

void ApiService::stop() {
  if (impl_) impl_->server.stop();
}

bool ApiService::running() const { return impl_->server.is_running(); }

}  // namespace ldq::app
