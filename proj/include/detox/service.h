// Copyright 2026 The Detox Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DETOX_SERVICE_H_
#define DETOX_SERVICE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "detox/model.h"
#include "detox/rewriter.h"
#include "detox/types.h"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace detox {

inline constexpr size_t kMaxRequestTextChars = 10000;

// Everything the service needs for one language.
struct ModelBundle {
  TrainedModel model;
  CorpusIndex corpus;
  Lexicon lexicon;
  std::string fingerprint;  // hash of the model file bytes
};

// Immutable set of loaded bundles. Requests hold a shared_ptr to the
// snapshot they started with, so a reload never changes an in-flight
// request.
struct ModelSnapshot {
  std::map<Language, std::shared_ptr<const ModelBundle>> bundles;
  std::vector<std::string> errors;
};

struct ServiceConfig {
  // Holds <code>.detoxmodel files.
  std::filesystem::path models_dir;
  // Optional directories holding <code>.tsv corpus and lexicon files.
  std::optional<std::filesystem::path> corpus_dir;
  std::optional<std::filesystem::path> lexicon_dir;
  std::filesystem::path feedback_log = "feedback.jsonl";
  LookupMode lookup = LookupMode::kNormalized;
  size_t max_text_chars = kMaxRequestTextChars;
  size_t top_contributions = 10;
};

enum class Verdict { kAccept, kWrongLabel, kBadRewrite };

std::string_view VerdictName(Verdict verdict);
std::optional<Verdict> ParseVerdict(std::string_view name);

struct FeedbackRecord {
  uint64_t id = 0;
  std::string timestamp;
  Language language = Language::kXhosa;
  std::string input_text;
  std::string system_output;
  Verdict verdict = Verdict::kAccept;
  std::optional<std::string> corrected_text;
  std::optional<std::string> annotator_handle;
};

nlohmann::json FeedbackToJson(const FeedbackRecord& record);

// Append-only JSON-lines log. Appends are serialized and fsync'ed before
// returning; ids continue from the largest id already in the file.
class FeedbackLog {
 public:
  explicit FeedbackLog(std::filesystem::path path);
  ~FeedbackLog();
  FeedbackLog(const FeedbackLog&) = delete;
  FeedbackLog& operator=(const FeedbackLog&) = delete;

  // Assigns id and timestamp, writes the record, returns the stored copy.
  // Throws IoError on storage failure.
  FeedbackRecord Append(FeedbackRecord record);

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mutex_;
  int fd_ = -1;
  uint64_t last_id_ = 0;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

class DetoxService {
 public:
  // Loads models immediately; a missing models directory leaves the
  // service running in a degraded state.
  explicit DetoxService(ServiceConfig config);

  // Re-reads every model, corpus and lexicon file and swaps in the new
  // snapshot atomically.
  void Reload();
  std::shared_ptr<const ModelSnapshot> snapshot() const;

  ApiResponse HandleDetox(std::string_view body) const;
  ApiResponse HandleFeedback(std::string_view body);
  ApiResponse HandleHealth() const;

  const ServiceConfig& config() const { return config_; }

 private:
  std::shared_ptr<const ModelSnapshot> LoadSnapshot() const;

  ServiceConfig config_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const ModelSnapshot> snapshot_;
  FeedbackLog feedback_;
};

// Binds the /api/v1 routes (and static files under /, when given) onto an
// httplib server.
class HttpServer {
 public:
  HttpServer(DetoxService& service,
             std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~HttpServer();

  // Returns the bound port, or -1 on failure. Port 0 picks a free port.
  int Bind(const std::string& host, int port);
  // Blocks until Stop() is called.
  bool Listen();
  void Stop();

 private:
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace detox

#endif  // DETOX_SERVICE_H_
