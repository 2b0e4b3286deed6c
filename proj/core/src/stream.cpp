#include "ldq/stream.hpp"

#include <atomic>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include "ldq/error.hpp"

namespace ldq {

namespace {

using Batch = std::shared_ptr<const std::vector<Triple>>;

// Bounded in triples rather than batches so the memory bound does not depend
// on the batch size.
class BatchQueue {
 public:
  explicit BatchQueue(std::size_t capacity) : capacity_(capacity) {}

  // Returns false when the queue was cancelled.
  bool push(Batch batch) {
    std::unique_lock lock(mutex_);
    not_full_.wait(lock, [&] {
      return cancelled_ || buffered_ == 0 || buffered_ + batch->size() <= capacity_;
    });
    if (cancelled_) return false;
    buffered_ += batch->size();
    items_.push_back(std::move(batch));
    not_empty_.notify_one();
    return true;
  }

  std::optional<Batch> pop() {
    std::unique_lock lock(mutex_);
    not_empty_.wait(lock, [&] { return cancelled_ || closed_ || !items_.empty(); });
    if (cancelled_ || items_.empty()) return std::nullopt;
    auto batch = std::move(items_.front());
    items_.pop_front();
    buffered_ -= batch->size();
    not_full_.notify_one();
    return batch;
  }

  void close() {
    std::lock_guard lock(mutex_);
    closed_ = true;
    not_empty_.notify_all();
  }

  void cancel() {
    std::lock_guard lock(mutex_);
    cancelled_ = true;
    not_empty_.notify_all();
    not_full_.notify_all();
  }

 private:
  std::mutex mutex_;
  std::condition_variable not_empty_;
  std::condition_variable not_full_;
  std::deque<Batch> items_;
  std::size_t capacity_;
  std::size_t buffered_ = 0;
  bool closed_ = false;
  bool cancelled_ = false;
};

struct SinkFailure {
  std::mutex mutex;
  std::optional<std::string> message;
  std::atomic<bool> failed{false};

  void record(std::string what) {
    std::lock_guard lock(mutex);
    if (!message) message = std::move(what);
    failed = true;
  }
};

}  // namespace

AssessmentRun stream_dataset(const DatasetSource& source, std::span<MetricInstance* const> sinks,
                             const StreamOptions& options) {
  AssessmentRun run;
  run.dataset_iri = options.dataset_iri;
  run.started_at = now_utc();

  std::ifstream dump;
  if (const auto* file = std::get_if<DumpFile>(&source)) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(file->path, ec)) {
      throw Error(ErrorCode::source_unreadable, "cannot read " + file->path.string());
    }
    dump.open(file->path, std::ios::binary);
    if (!dump) throw Error(ErrorCode::source_unreadable, "cannot open " + file->path.string());
  }

  const std::size_t batch_size = std::max<std::size_t>(1, options.batch_size);
  std::vector<std::unique_ptr<BatchQueue>> queues;
  for (std::size_t i = 0; i < sinks.size(); ++i) {
    queues.push_back(std::make_unique<BatchQueue>(std::max(options.queue_capacity, batch_size)));
  }

  SinkFailure failure;
  auto cancel_all = [&] {
    for (auto& q : queues) q->cancel();
  };

  std::vector<std::thread> consumers;
  consumers.reserve(sinks.size());
  for (std::size_t i = 0; i < sinks.size(); ++i) {
    consumers.emplace_back([&, i] {
      MetricInstance& sink = *sinks[i];
      while (auto batch = queues[i]->pop()) {
        try {
          for (const auto& t : **batch) sink.accept(t);
        } catch (const std::exception& e) {
          failure.record(sink.metric_iri() + ": " + e.what());
          cancel_all();
          return;
        } catch (...) {
          failure.record(sink.metric_iri() + ": unknown exception");
          cancel_all();
          return;
        }
      }
    });
  }

  auto current = std::make_shared<std::vector<Triple>>();
  current->reserve(batch_size);
  auto flush = [&] {
    if (current->empty()) return;
    Batch batch = std::move(current);
    for (auto& q : queues) q->push(batch);
    current = std::make_shared<std::vector<Triple>>();
    current->reserve(batch_size);
  };
  auto deliver = [&](Triple&& t) {
    if (failure.failed) return;
    ++run.total_triples;
    current->push_back(std::move(t));
    if (current->size() >= batch_size) flush();
  };

  std::exception_ptr producer_error;
  try {
    if (std::holds_alternative<DumpFile>(source)) {
      NTriplesReader reader(dump);
      while (!failure.failed) {
        auto item = reader.next();
        if (!item) break;
        if (auto* t = std::get_if<Triple>(&*item)) {
          deliver(std::move(*t));
        } else {
          run.parse_errors.push_back(std::get<LineError>(std::move(*item)));
        }
      }
    } else {
      const auto& endpoint = std::get<Endpoint>(source);
      auto http = options.http ? options.http : std::make_shared<BasicHttpClient>();
      fetch_endpoint_pages(endpoint, *http, deliver);
    }
    flush();
  } catch (...) {
    producer_error = std::current_exception();
    cancel_all();
  }

  for (auto& q : queues) q->close();
  for (auto& c : consumers) c.join();

  if (producer_error) std::rethrow_exception(producer_error);
  if (failure.failed) {
    throw Error(ErrorCode::sink_panicked, "metric failed during accept: " + *failure.message);
  }

  run.finished_at = now_utc();
  for (auto* sink : sinks) sink->finalize(run);
  return run;
}

}  // namespace ldq
