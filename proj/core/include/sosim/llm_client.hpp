#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "sosim/agents.hpp"

namespace sosim {

// Append-only JSONL log of raw request/response pairs; one writer object
// may be shared across movie workers.
class AuditLog {
 public:
  explicit AuditLog(std::string path);

  void append(const std::string& request_body, int status,
              const std::string& response_body);

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::mutex mutex_;
};

// Issues n_samples independent chat-completion requests and returns the
// parsed integer ratings in request order. Transport failures and
// unparseable replies are each retried up to cfg.max_retries times per
// sample before TransportError / ParseError; HTTP 401/403 raise AuthError
// immediately.
std::vector<int> llm_rate(const LlmBackendConfig& cfg, const std::string& prompt,
                          int n_samples, const RatingScale& scale,
                          std::uint64_t seed, AuditLog* audit = nullptr);

// RatingAgent backed by a remote chat-completion endpoint. Safe for
// concurrent use across movies; each request uses its own connection.
class LlmAgent : public RatingAgent {
 public:
  explicit LlmAgent(LlmBackendConfig cfg, AuditLog* audit = nullptr);

  std::vector<int> rate(const AgentContext& ctx, const ScenarioConfig& scenario,
                        int n_samples) override;

 private:
  LlmBackendConfig cfg_;
  AuditLog* audit_;
};

}  // namespace sosim
