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

#include "detox/service.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>

#include "detox/classifier.h"
#include "detox/corpus_io.h"
#include "detox/errors.h"
#include "detox/hash.h"
#include "detox/normalizer.h"
#include "httplib.h"

namespace detox {
namespace {

using nlohmann::json;

ApiResponse ErrorResponse(int status, std::string_view code,
                          const std::string& message) {
  return {status, {{"error", {{"code", code}, {"message", message}}}}};
}

std::string UtcTimestamp() {
  auto now = std::chrono::system_clock::now();
  auto millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                    now.time_since_epoch())
                    .count() %
                1000;
  std::time_t seconds = std::chrono::system_clock::to_time_t(now);
  std::tm utc{};
  gmtime_r(&seconds, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%S", &utc);
  char out[40];
  std::snprintf(out, sizeof(out), "%s.%03dZ", buffer, static_cast<int>(millis));
  return out;
}

// Reads an optional string member; throws on a present non-string value.
std::optional<std::string> OptionalString(const json& body, const char* key) {
  if (!body.contains(key) || body.at(key).is_null()) return std::nullopt;
  if (!body.at(key).is_string()) {
    throw InvalidArgumentError(std::string("'") + key + "' must be a string");
  }
  return body.at(key).get<std::string>();
}

std::string RequiredString(const json& body, const char* key) {
  auto value = OptionalString(body, key);
  if (!value) {
    throw InvalidArgumentError(std::string("'") + key + "' is required");
  }
  return *value;
}

}  // namespace

std::string_view VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kAccept:
      return "accept";
    case Verdict::kWrongLabel:
      return "wrong_label";
    case Verdict::kBadRewrite:
      return "bad_rewrite";
  }
  return "unknown";
}

std::optional<Verdict> ParseVerdict(std::string_view name) {
  for (Verdict v :
       {Verdict::kAccept, Verdict::kWrongLabel, Verdict::kBadRewrite}) {
    if (VerdictName(v) == name) return v;
  }
  return std::nullopt;
}

json FeedbackToJson(const FeedbackRecord& record) {
  json out = {{"id", record.id},
              {"timestamp", record.timestamp},
              {"language", LanguageCode(record.language)},
              {"input_text", record.input_text},
              {"system_output", record.system_output},
              {"verdict", VerdictName(record.verdict)},
              {"corrected_text", nullptr},
              {"annotator_handle", nullptr}};
  if (record.corrected_text) out["corrected_text"] = *record.corrected_text;
  if (record.annotator_handle) {
    out["annotator_handle"] = *record.annotator_handle;
  }
  return out;
}

FeedbackLog::FeedbackLog(std::filesystem::path path) : path_(std::move(path)) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(path_, ec)) {
    std::ifstream existing(path_);
    std::string line;
    while (std::getline(existing, line)) {
      json record = json::parse(line, nullptr, false);
      if (record.is_object() && record.contains("id") &&
          record.at("id").is_number_unsigned()) {
        last_id_ = std::max(last_id_, record.at("id").get<uint64_t>());
      }
    }
  }
  fd_ = ::open(path_.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw IoError("cannot open feedback log " + path_.string() + ": " +
                  std::strerror(errno));
  }
}

FeedbackLog::~FeedbackLog() {
  if (fd_ >= 0) ::close(fd_);
}

FeedbackRecord FeedbackLog::Append(FeedbackRecord record) {
  std::lock_guard<std::mutex> lock(mutex_);
  record.id = last_id_ + 1;
  record.timestamp = UtcTimestamp();
  std::string line = FeedbackToJson(record).dump() + "\n";
  const char* data = line.data();
  size_t remaining = line.size();
  while (remaining > 0) {
    ssize_t written = ::write(fd_, data, remaining);
    if (written < 0) {
      if (errno == EINTR) continue;
      throw IoError("feedback log write failed: " +
                    std::string(std::strerror(errno)));
    }
    data += written;
    remaining -= static_cast<size_t>(written);
  }
  if (::fdatasync(fd_) != 0) {
    throw IoError("feedback log sync failed: " +
                  std::string(std::strerror(errno)));
  }
  last_id_ = record.id;
  return record;
}

DetoxService::DetoxService(ServiceConfig config)
    : config_(std::move(config)), feedback_(config_.feedback_log) {
  snapshot_ = LoadSnapshot();
}

std::shared_ptr<const ModelSnapshot> DetoxService::LoadSnapshot() const {
  auto snapshot = std::make_shared<ModelSnapshot>();
  std::error_code ec;
  if (!std::filesystem::is_directory(config_.models_dir, ec)) {
    snapshot->errors.push_back("models directory " +
                               config_.models_dir.string() + " not found");
    return snapshot;
  }
  for (Language language : kAllLanguages) {
    const std::string code(LanguageCode(language));
    std::filesystem::path model_path =
        config_.models_dir / (code + std::string(kModelExtension));
    if (!std::filesystem::exists(model_path, ec)) continue;
    try {
      auto bundle = std::make_shared<ModelBundle>();
      std::string bytes = ReadTextFile(model_path);
      bundle->model = DeserializeModel(bytes);
      bundle->fingerprint = Fingerprint(bytes);
      if (bundle->model.language != language) {
        throw ConfigError(model_path.string() + " holds a model for '" +
                          std::string(LanguageCode(bundle->model.language)) +
                          "'");
      }
      bundle->lexicon.language = language;
      if (config_.corpus_dir) {
        auto path = *config_.corpus_dir / (code + ".tsv");
        if (std::filesystem::exists(path, ec)) {
          auto pairs = LoadParallelCorpus(path, language);
          bundle->corpus = CorpusIndex::Build(pairs, config_.lookup);
        }
      }
      if (config_.lexicon_dir) {
        auto path = *config_.lexicon_dir / (code + ".tsv");
        if (std::filesystem::exists(path, ec)) {
          bundle->lexicon = LoadLexicon(path, language);
        }
      }
      snapshot->bundles.emplace(language, std::move(bundle));
    } catch (const std::exception& e) {
      snapshot->errors.push_back(code + ": " + e.what());
    }
  }
  return snapshot;
}

void DetoxService::Reload() {
  std::shared_ptr<const ModelSnapshot> fresh = LoadSnapshot();
  std::lock_guard<std::mutex> lock(snapshot_mutex_);
  snapshot_ = std::move(fresh);
}

std::shared_ptr<const ModelSnapshot> DetoxService::snapshot() const {
  std::lock_guard<std::mutex> lock(snapshot_mutex_);
  return snapshot_;
}

ApiResponse DetoxService::HandleDetox(std::string_view body_text) const {
  json body = json::parse(body_text, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    return ErrorResponse(400, "malformed_body",
                         "request body must be a JSON object");
  }
  std::string text;
  std::string code;
  try {
    text = RequiredString(body, "text");
    code = RequiredString(body, "language");
  } catch (const InvalidArgumentError& e) {
    return ErrorResponse(400, "validation_error", e.what());
  }
  if (CodePointCount(text) > config_.max_text_chars) {
    return ErrorResponse(400, "validation_error",
                         "text exceeds " +
                             std::to_string(config_.max_text_chars) +
                             " characters");
  }

  auto snapshot = this->snapshot();
  auto language = ParseLanguage(code);
  auto it =
      language ? snapshot->bundles.find(*language) : snapshot->bundles.end();
  if (it == snapshot->bundles.end()) {
    return ErrorResponse(404, "unknown_language",
                         "no model loaded for language '" + code + "'");
  }
  const ModelBundle& bundle = *it->second;

  DetoxResult result =
      Detoxify(text, bundle.model, bundle.corpus, bundle.lexicon);
  json replaced = json::array();
  for (const Replacement& r : result.replaced_tokens) {
    replaced.push_back(
        {{"original", r.original}, {"replacement", r.replacement}});
  }
  json contributions = json::array();
  for (const TermWeight& t :
       TermContributions(bundle.model, text, config_.top_contributions)) {
    contributions.push_back({{"term", t.term}, {"contribution", t.weight}});
  }
  return {200,
          {{"language", code},
           {"label", result.label == Label::kToxic ? "TOXIC" : "NON-TOXIC"},
           {"probability", result.probability},
           {"threshold", bundle.model.threshold},
           {"output_text", result.output_text},
           {"method", DetoxMethodName(result.method)},
           {"replaced_tokens", replaced},
           {"token_contributions", contributions}}};
}

ApiResponse DetoxService::HandleFeedback(std::string_view body_text) {
  json body = json::parse(body_text, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    return ErrorResponse(400, "malformed_body",
                         "request body must be a JSON object");
  }
  FeedbackRecord record;
  try {
    auto language = ParseLanguage(RequiredString(body, "language"));
    if (!language) throw InvalidArgumentError("unsupported language");
    record.language = *language;
    record.input_text = RequiredString(body, "input_text");
    if (record.input_text.empty()) {
      throw InvalidArgumentError("'input_text' must not be empty");
    }
    record.system_output = RequiredString(body, "system_output");
    auto verdict = ParseVerdict(RequiredString(body, "verdict"));
    if (!verdict) {
      throw InvalidArgumentError(
          "'verdict' must be accept, wrong_label or bad_rewrite");
    }
    record.verdict = *verdict;
    record.corrected_text = OptionalString(body, "corrected_text");
    record.annotator_handle = OptionalString(body, "annotator_handle");
    if (record.verdict == Verdict::kBadRewrite &&
        (!record.corrected_text || record.corrected_text->empty())) {
      throw InvalidArgumentError("bad_rewrite requires 'corrected_text'");
    }
  } catch (const InvalidArgumentError& e) {
    return ErrorResponse(400, "validation_error", e.what());
  }
  try {
    FeedbackRecord stored = feedback_.Append(std::move(record));
    return {201, {{"id", stored.id}, {"timestamp", stored.timestamp}}};
  } catch (const IoError& e) {
    return ErrorResponse(500, "storage_error", e.what());
  }
}

ApiResponse DetoxService::HandleHealth() const {
  auto snapshot = this->snapshot();
  json loaded = json::array();
  json versions = json::object();
  for (const auto& [language, bundle] : snapshot->bundles) {
    const std::string code(LanguageCode(language));
    loaded.push_back(code);
    versions[code] = {{"fingerprint", bundle->fingerprint},
                      {"format_version", kModelFormatVersion},
                      {"trained_at", bundle->model.trained_at},
                      {"config_fingerprint", bundle->model.config_fingerprint},
                      {"corpus_entries", bundle->corpus.size()},
                      {"lexicon_entries", bundle->lexicon.entries.size()}};
  }
  bool healthy = !snapshot->bundles.empty() && snapshot->errors.empty();
  return {200,
          {{"status", healthy ? "ok" : "degraded"},
           {"models_loaded", loaded},
           {"versions", versions},
           {"errors", snapshot->errors}}};
}

HttpServer::HttpServer(DetoxService& service,
                       std::optional<std::filesystem::path> static_dir)
    : server_(std::make_unique<httplib::Server>()) {
  auto reply = [](httplib::Response& res, const ApiResponse& api) {
    res.status = api.status;
    res.set_content(api.body.dump(), "application/json; charset=utf-8");
  };
  server_->Post("/api/v1/detox", [&service, reply](const httplib::Request& req,
                                                   httplib::Response& res) {
    reply(res, service.HandleDetox(req.body));
  });
  server_->Post(
      "/api/v1/feedback",
      [&service, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, service.HandleFeedback(req.body));
      });
  server_->Get("/api/v1/health", [&service, reply](const httplib::Request&,
                                                   httplib::Response& res) {
    reply(res, service.HandleHealth());
  });
  server_->Post("/api/v1/reload", [&service, reply](const httplib::Request&,
                                                    httplib::Response& res) {
    service.Reload();
    reply(res, service.HandleHealth());
  });
  server_->set_exception_handler([reply](const httplib::Request&,
                                         httplib::Response& res,
                                         std::exception_ptr ep) {
    std::string message = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      message = e.what();
    } catch (...) {
    }
    reply(res, ErrorResponse(500, "internal_error", message));
  });
  if (static_dir) server_->set_mount_point("/", static_dir->string());
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::Listen() { return server_->listen_after_bind(); }

void HttpServer::Stop() {
  if (server_) server_->stop();
}

}  // namespace detox
