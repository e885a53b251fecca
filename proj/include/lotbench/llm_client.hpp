#ifndef LOTBENCH_LLM_CLIENT_HPP
#define LOTBENCH_LLM_CLIENT_HPP

// Remote learner speaking the OpenAI-compatible chat-completions protocol.
//
// Each prompt is posted as a single user message with temperature 0 and a
// small completion budget, mirroring greedy decoding. Transient failures
// (connect errors, 408/429/5xx) retry with exponential backoff; credential
// rejections abort the whole batch. A failed prompt is recorded as
// unevaluated, never scored.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lotbench/promptgen.hpp"
#include "lotbench/stats.hpp"

namespace lotbench {

struct EndpointConfig {
  std::string base_url;   // e.g. http://127.0.0.1:8000/v1
  std::string model;
  std::string auth_env = "LLM_API_TOKEN";  // env var holding the bearer token
  int max_tokens = 5;
  double temperature = 0.0;
  int max_attempts = 3;
  int retry_delay_ms = 500;        // doubles per retry
  double requests_per_second = 0;  // 0 disables pacing
  int timeout_ms = 30000;
};

EndpointConfig load_endpoint_config(const std::filesystem::path& path);

// One completion round-trip. Throws AuthError on 401/403 and EndpointError
// when every attempt failed.
Prediction remote_predict(const std::string& rendered_text,
                          const EndpointConfig& config);

// Evaluates every prompt with at most max_in_flight concurrent requests.
// Results line up with the prompt order regardless of completion order;
// per-prompt failures are recorded in the EvalRecord. Throws AuthError.
std::vector<EvalRecord> run_batch(const PromptSet& prompt_set, int complexity,
                                  const EndpointConfig& config, int max_in_flight);

}  // namespace lotbench

#endif  // LOTBENCH_LLM_CLIENT_HPP
