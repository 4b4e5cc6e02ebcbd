#include "rvnli/llm/client.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "rvnli/error.hpp"

namespace rvnli::llm {

namespace fs = std::filesystem;

fs::path FixtureClient::path_for(const fs::path& dir, const Prompt& prompt) {
  return dir / std::string(to_string(prompt.id)) / (prompt.key() + ".txt");
}

std::string FixtureClient::complete(const Prompt& prompt, const CompletionParams&) {
  auto path = path_for(dir_, prompt);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LlmUnavailable("no fixture response at " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string RecordingClient::complete(const Prompt& prompt, const CompletionParams& params) {
  std::string answer = inner_.complete(prompt, params);
  auto path = FixtureClient::path_for(dir_, prompt);
  fs::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << answer;
  return answer;
}

HttpConfig HttpConfig::from_json(const nlohmann::json& j) {
  HttpConfig c;
  c.endpoint = j.value("endpoint", c.endpoint);
  c.model = j.value("model", c.model);
  c.api_key_env = j.value("api_key_env", c.api_key_env);
  c.temperature = j.value("temperature", c.temperature);
  c.thinking = j.value("thinking", c.thinking);
  c.max_retries = j.value("max_retries", c.max_retries);
  c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
  if (c.max_retries < 1) throw ConfigError("max_retries must be at least 1");
  return c;
}

nlohmann::json HttpClient::request_body(const Prompt& prompt, const CompletionParams& params) const {
  nlohmann::json messages = nlohmann::json::array();
  if (prompt.user.empty()) {
    messages.push_back({{"role", "user"}, {"content", prompt.system}});
  } else {
    messages.push_back({{"role", "system"}, {"content", prompt.system}});
    messages.push_back({{"role", "user"}, {"content", prompt.user}});
  }
  nlohmann::json body{{"model", config_.model}, {"messages", messages}};
  if (!config_.thinking) body["temperature"] = params.temperature != 0.0 ? params.temperature : config_.temperature;
  if (!params.effort.empty()) body["reasoning_effort"] = params.effort;
  return body;
}

std::string HttpClient::complete(const Prompt& prompt, const CompletionParams& params) {
  static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.endpoint, m, url_re)) throw ConfigError("bad endpoint URL: " + config_.endpoint);
  const std::string base = m[1];
  const std::string path = m[2].matched ? std::string(m[2]) : "/";

  httplib::Headers headers;
  if (const char* key = std::getenv(config_.api_key_env.c_str()); key && *key)
    headers.emplace("Authorization", std::string("Bearer ") + key);
  const std::string body = request_body(prompt, params).dump();

  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt < config_.max_retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(500 << (attempt - 1)));
    httplib::Client cli(base);
    cli.set_connection_timeout(config_.timeout_seconds);
    cli.set_read_timeout(config_.timeout_seconds);
    auto res = cli.Post(path, headers, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) throw LlmUnavailable("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
    try {
      auto j = nlohmann::json::parse(res->body);
      return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw LlmUnavailable(std::string("malformed completion response: ") + e.what());
    }
  }
  throw LlmUnavailable("LLM endpoint unreachable after " + std::to_string(config_.max_retries) + " attempts: " + last_error);
}

}  // namespace rvnli::llm
