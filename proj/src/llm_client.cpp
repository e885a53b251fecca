#include "lotbench/llm_client.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "lotbench/io_util.hpp"

namespace lotbench {

EndpointConfig load_endpoint_config(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("endpoint config " + path.string() + " is not valid JSON: " +
                      e.what());
  }
  EndpointConfig config;
  if (!doc.contains("base_url") || !doc.contains("model")) {
    throw ConfigError("endpoint config requires 'base_url' and 'model'");
  }
  config.base_url = doc["base_url"].get<std::string>();
  config.model = doc["model"].get<std::string>();
  config.auth_env = doc.value("auth_env", config.auth_env);
  config.max_tokens = doc.value("max_tokens", config.max_tokens);
  config.temperature = doc.value("temperature", config.temperature);
  config.max_attempts = doc.value("max_attempts", config.max_attempts);
  config.retry_delay_ms = doc.value("retry_delay_ms", config.retry_delay_ms);
  config.requests_per_second =
      doc.value("requests_per_second", config.requests_per_second);
  config.timeout_ms = doc.value("timeout_ms", config.timeout_ms);
  if (config.base_url.empty() || config.model.empty()) {
    throw ConfigError("endpoint config has an empty base_url or model");
  }
  if (config.max_attempts < 1) {
    throw ConfigError("endpoint config max_attempts must be at least 1");
  }
  return config;
}

namespace {

struct EndpointTarget {
  std::string origin;       // scheme://host[:port]
  std::string path_prefix;  // possibly empty, no trailing slash
};

EndpointTarget split_base_url(const std::string& base_url) {
  const std::size_t scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("base_url must include a scheme: " + base_url);
  }
  const std::size_t path_start = base_url.find('/', scheme_end + 3);
  EndpointTarget target;
  if (path_start == std::string::npos) {
    target.origin = base_url;
  } else {
    target.origin = base_url.substr(0, path_start);
    target.path_prefix = base_url.substr(path_start);
    while (!target.path_prefix.empty() && target.path_prefix.back() == '/') {
      target.path_prefix.pop_back();
    }
  }
  return target;
}

bool transient_status(int status) {
  return status == 408 || status == 429 || (status >= 500 && status < 600);
}

std::string request_body(const std::string& rendered_text,
                         const EndpointConfig& config) {
  nlohmann::json body;
  body["model"] = config.model;
  body["messages"] = nlohmann::json::array(
      {{{"role", "user"}, {"content", rendered_text}}});
  body["temperature"] = config.temperature;
  body["max_tokens"] = config.max_tokens;
  return body.dump();
}

std::string extract_content(const std::string& response_body) {
  nlohmann::json doc = nlohmann::json::parse(response_body, nullptr, false);
  if (doc.is_discarded()) {
    throw EndpointError("endpoint returned a non-JSON body");
  }
  if (!doc.contains("choices") || !doc["choices"].is_array() ||
      doc["choices"].empty()) {
    throw EndpointError("endpoint response has no choices");
  }
  const auto& message = doc["choices"][0]["message"];
  if (!message.contains("content")) {
    throw EndpointError("endpoint response choice has no message content");
  }
  return message["content"].get<std::string>();
}

Prediction predict_once(httplib::Client& client, const EndpointTarget& target,
                        const std::string& rendered_text,
                        const EndpointConfig& config) {
  const std::string body = request_body(rendered_text, config);
  std::string last_error;
  for (int attempt = 1; attempt <= config.max_attempts; ++attempt) {
    if (attempt > 1) {
      const auto delay = std::chrono::milliseconds(
          static_cast<long>(config.retry_delay_ms) << (attempt - 2));
      std::this_thread::sleep_for(delay);
    }
    auto result = client.Post(target.path_prefix + "/chat/completions", body,
                              "application/json");
    if (!result) {
      last_error = "connection failure: " + httplib::to_string(result.error());
      continue;  // transient
    }
    if (result->status == 401 || result->status == 403) {
      throw AuthError("endpoint rejected credentials with HTTP " +
                      std::to_string(result->status));
    }
    if (transient_status(result->status)) {
      last_error = "HTTP " + std::to_string(result->status);
      continue;
    }
    if (result->status != 200) {
      throw EndpointError("endpoint returned HTTP " + std::to_string(result->status));
    }
    return parse_answer(extract_content(result->body));
  }
  throw EndpointError("endpoint failed after " + std::to_string(config.max_attempts) +
                      " attempts; last error: " + last_error);
}

void apply_auth(httplib::Client& client, const EndpointConfig& config) {
  if (config.auth_env.empty()) return;
  const char* token = std::getenv(config.auth_env.c_str());
  if (token != nullptr && token[0] != '\0') {
    client.set_bearer_token_auth(token);
  }
}

// Spaces requests out to the configured rate across all workers.
class Pacer {
 public:
  explicit Pacer(double requests_per_second) {
    if (requests_per_second > 0) {
      interval_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
          std::chrono::duration<double>(1.0 / requests_per_second));
    }
  }

  void wait() {
    if (interval_.count() == 0) return;
    std::chrono::steady_clock::time_point wake;
    {
      std::lock_guard lock(mutex_);
      const auto now = std::chrono::steady_clock::now();
      next_ = std::max(next_, now);
      wake = next_;
      next_ += interval_;
    }
    std::this_thread::sleep_until(wake);
  }

 private:
  std::chrono::steady_clock::duration interval_{0};
  std::chrono::steady_clock::time_point next_{};
  std::mutex mutex_;
};

}  // namespace

Prediction remote_predict(const std::string& rendered_text,
                          const EndpointConfig& config) {
  const EndpointTarget target = split_base_url(config.base_url);
  httplib::Client client(target.origin);
  client.set_connection_timeout(0, config.timeout_ms * 1000);
  client.set_read_timeout(config.timeout_ms / 1000, (config.timeout_ms % 1000) * 1000);
  apply_auth(client, config);
  return predict_once(client, target, rendered_text, config);
}

std::vector<EvalRecord> run_batch(const PromptSet& prompt_set, int complexity,
                                  const EndpointConfig& config, int max_in_flight) {
  if (max_in_flight < 1) {
    throw ConfigError("max_in_flight must be at least 1");
  }
  const std::size_t n = prompt_set.prompts.size();
  std::vector<EvalRecord> records(n);
  if (n == 0) return records;

  const EndpointTarget target = split_base_url(config.base_url);
  Pacer pacer(config.requests_per_second);
  std::atomic<std::size_t> next_index{0};
  std::atomic<bool> abort{false};
  std::mutex auth_error_mutex;
  std::exception_ptr auth_error;

  const std::size_t worker_count =
      std::min<std::size_t>(static_cast<std::size_t>(max_in_flight), n);
  std::vector<std::thread> workers;
  workers.reserve(worker_count);
  for (std::size_t w = 0; w < worker_count; ++w) {
    workers.emplace_back([&] {
      httplib::Client client(target.origin);
      client.set_connection_timeout(0, config.timeout_ms * 1000);
      client.set_read_timeout(config.timeout_ms / 1000,
                              (config.timeout_ms % 1000) * 1000);
      apply_auth(client, config);
      while (!abort.load()) {
        const std::size_t i = next_index.fetch_add(1);
        if (i >= n) break;
        const Prompt& prompt = prompt_set.prompts[i];
        EvalRecord& record = records[i];
        record.concept_id = prompt.concept_id;
        record.complexity = complexity;
        record.prompt_index = i;
        record.answer = prompt.answer;
        try {
          pacer.wait();
          Prediction prediction =
              predict_once(client, target, render_prompt(prompt), config);
          record.correct = prediction.matches(prompt.answer);
          record.prediction = std::move(prediction);
        } catch (const AuthError&) {
          std::lock_guard lock(auth_error_mutex);
          if (!auth_error) auth_error = std::current_exception();
          abort.store(true);
        } catch (const Error& e) {
          record.error = e.what();  // unevaluated, correct stays empty
        }
      }
    });
  }
  for (auto& worker : workers) worker.join();
  if (auth_error) std::rethrow_exception(auth_error);
  return records;
}

}  // namespace lotbench
