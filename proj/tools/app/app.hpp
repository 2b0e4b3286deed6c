#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ldq/http.hpp"
#include "ldq/taxonomy.hpp"

namespace httplib {
class Server;
}

namespace ldq::app {

enum ExitCode : int { kOk = 0, kPipelineFailure = 1, kConfigError = 2 };

struct AssessConfig {
  std::optional<std::filesystem::path> input;
  std::optional<std::string> endpoint;
  std::string dataset_iri;
  std::optional<std::filesystem::path> taxonomy;
  std::vector<std::string> metrics;  // empty = every metric of the taxonomy
  std::filesystem::path out;
  bool sample = false;
  std::optional<std::filesystem::path> vocab_dir;
  std::size_t page_size = 5000;
  std::uint64_t seed = 0x5eed;
  std::chrono::milliseconds http_timeout{10'000};
  /// Injected by tests; a BasicHttpClient otherwise.
  std::shared_ptr<HttpClient> http;
};

int cmd_assess(const AssessConfig& config, std::ostream& out, std::ostream& err);

struct RankConfig {
  std::filesystem::path store;
  std::filesystem::path weights;
  std::optional<std::filesystem::path> taxonomy;
  std::optional<std::filesystem::path> output;  // default <store>/ranking.json
};

int cmd_rank(const RankConfig& config, std::ostream& out, std::ostream& err);

int cmd_lqml_check(const std::filesystem::path& file, std::ostream& out, std::ostream& err);

/// The taxonomy a store was assessed with: `--taxonomy`, else
/// `<store>/taxonomy.json`, else the bundled default.
Taxonomy resolve_taxonomy(const std::optional<std::filesystem::path>& explicit_path,
                          const std::filesystem::path& store);

/// Read-only JSON API over a metadata store directory plus the stateless
/// ranking computation. The store snapshot is reloaded when its files change.
class ApiService {
 public:
  ApiService(std::filesystem::path store_dir, Taxonomy taxonomy,
             std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~ApiService();

  ApiService(const ApiService&) = delete;
  ApiService& operator=(const ApiService&) = delete;

  bool listen(const std::string& host, int port);
  /// Binds an ephemeral port and returns it (or -1).
  int bind_any_port(const std::string& host);
  bool listen_after_bind();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ldq::app
