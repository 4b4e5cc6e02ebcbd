#pragma once

#include <filesystem>
#include <functional>
#include <json.hpp>
#include <mutex>
#include <string>

#include "rvnli/llm/prompts.hpp"

namespace rvnli::llm {

struct CompletionParams {
  double temperature = 0.0;
  // Reasoning effort for thinking backends; empty means unrestricted.
  std::string effort;
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  virtual std::string name() const = 0;
  // Throws LlmUnavailable when no answer can be produced.
  virtual std::string complete(const Prompt& prompt, const CompletionParams& params = {}) = 0;
};

// Replays `<dir>/<template-id>/<slot-hash>.txt`.
class FixtureClient final : public LlmClient {
 public:
  explicit FixtureClient(std::filesystem::path dir) : dir_(std::move(dir)) {}
  std::string name() const override { return "fixture"; }
  std::string complete(const Prompt& prompt, const CompletionParams& params = {}) override;

  static std::filesystem::path path_for(const std::filesystem::path& dir, const Prompt& prompt);

 private:
  std::filesystem::path dir_;
};

// Forwards to `inner` and writes every answer where a FixtureClient will find it.
class RecordingClient final : public LlmClient {
 public:
  RecordingClient(LlmClient& inner, std::filesystem::path dir) : inner_(inner), dir_(std::move(dir)) {}
  std::string name() const override { return "recording:" + inner_.name(); }
  std::string complete(const Prompt& prompt, const CompletionParams& params = {}) override;

 private:
  LlmClient& inner_;
  std::filesystem::path dir_;
};

class FunctionClient final : public LlmClient {
 public:
  using Fn = std::function<std::string(const Prompt&)>;
  explicit FunctionClient(Fn fn, std::string name = "function") : fn_(std::move(fn)), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  std::string complete(const Prompt& prompt, const CompletionParams&) override { return fn_(prompt); }

 private:
  Fn fn_;
  std::string name_;
};

// One call at a time, for clients that are not safe under concurrency.
class SerializingClient final : public LlmClient {
 public:
  explicit SerializingClient(LlmClient& inner) : inner_(inner) {}
  std::string name() const override { return inner_.name(); }
  std::string complete(const Prompt& prompt, const CompletionParams& params = {}) override {
    std::lock_guard lock(mu_);
    return inner_.complete(prompt, params);
  }

 private:
  LlmClient& inner_;
  std::mutex mu_;
};

struct HttpConfig {
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string model = "gpt-4o";
  std::string api_key_env = "OPENAI_API_KEY";
  double temperature = 0.0;
  // Thinking backends get no temperature.
  bool thinking = false;
  int max_retries = 3;
  int timeout_seconds = 120;

  static HttpConfig from_json(const nlohmann::json& j);
};

// Generic chat-completions transport with exponential backoff.
class HttpClient final : public LlmClient {
 public:
  explicit HttpClient(HttpConfig config) : config_(std::move(config)) {}
  std::string name() const override { return "http:" + config_.model; }
  std::string complete(const Prompt& prompt, const CompletionParams& params = {}) override;

  // Request body for `prompt`; exposed for tests.
  nlohmann::json request_body(const Prompt& prompt, const CompletionParams& params) const;

 private:
  HttpConfig config_;
};

}  // namespace rvnli::llm
