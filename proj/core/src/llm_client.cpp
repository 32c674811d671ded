#include "sosim/llm_client.hpp"

#include <cstdlib>
#include <fstream>

#include <httplib.h>
#include <json.hpp>

#include "sosim/errors.hpp"

namespace sosim {

using nlohmann::json;

AuditLog::AuditLog(std::string path) : path_(std::move(path)) {}

void AuditLog::append(const std::string& request_body, int status,
                      const std::string& response_body) {
  std::lock_guard<std::mutex> lock(mutex_);
  std::ofstream out(path_, std::ios::app);
  if (!out) throw IoError("audit log: cannot open " + path_);
  json line;
  line["request"] = request_body;
  line["status"] = status;
  line["response"] = response_body;
  out << line.dump() << '\n';
}

namespace {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;
};

Endpoint parse_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("endpoint_url must include a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint ep;
  if (path_start == std::string::npos) {
    ep.base = url;
    ep.path = "/v1/chat/completions";
  } else {
    ep.base = url.substr(0, path_start);
    ep.path = url.substr(path_start);
  }
  return ep;
}

std::string bearer_token(const LlmBackendConfig& cfg) {
  if (cfg.auth_token_env_var.empty()) return {};
  const char* value = std::getenv(cfg.auth_token_env_var.c_str());
  return value ? value : "";
}

// One request; returns the assistant message content.
std::string complete_once(const LlmBackendConfig& cfg, const Endpoint& ep,
                          const std::string& body, const std::string& token,
                          AuditLog* audit) {
  httplib::Client client(ep.base);
  const time_t sec = cfg.timeout_ms / 1000;
  const time_t usec = (cfg.timeout_ms % 1000) * 1000;
  client.set_connection_timeout(sec, usec);
  client.set_read_timeout(sec, usec);
  client.set_write_timeout(sec, usec);

  httplib::Headers headers;
  if (!token.empty()) headers.emplace("Authorization", "Bearer " + token);

  auto res = client.Post(ep.path, headers, body, "application/json");
  if (!res) {
    if (audit) audit->append(body, -1, httplib::to_string(res.error()));
    throw TransportError("llm_rate: " + httplib::to_string(res.error()) +
                         " talking to " + ep.base);
  }
  if (audit) audit->append(body, res->status, res->body);
  if (res->status == 401 || res->status == 403)
    throw AuthError("llm_rate: endpoint rejected credentials (HTTP " +
                    std::to_string(res->status) + ")");
  if (res->status != 200)
    throw TransportError("llm_rate: HTTP " + std::to_string(res->status) +
                         " from " + ep.base + ep.path);

  json reply = json::parse(res->body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("choices") ||
      reply["choices"].empty() || !reply["choices"][0].contains("message"))
    throw TransportError("llm_rate: malformed completion payload");
  return reply["choices"][0]["message"].value("content", "");
}

}  // namespace

std::vector<int> llm_rate(const LlmBackendConfig& cfg, const std::string& prompt,
                          int n_samples, const RatingScale& scale,
                          std::uint64_t /*seed*/, AuditLog* audit) {
  if (n_samples < 1) throw ConfigError("llm_rate: n_samples must be >= 1");
  const Endpoint ep = parse_endpoint(cfg.endpoint_url);
  const std::string token = bearer_token(cfg);

  json body_json;
  body_json["model"] = cfg.model_name;
  body_json["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});
  body_json["temperature"] = cfg.temperature;
  const std::string body = body_json.dump();

  std::vector<int> samples;
  samples.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    int transport_left = cfg.max_retries;
    int parse_left = cfg.max_retries;
    for (;;) {
      std::string content;
      try {
        content = complete_once(cfg, ep, body, token, audit);
      } catch (const AuthError&) {
        throw;
      } catch (const TransportError&) {
        if (transport_left-- > 0) continue;
        throw;
      }
      try {
        samples.push_back(parse_rating(content, scale));
        break;
      } catch (const NoRatingFound&) {
        if (parse_left-- > 0) continue;  // re-ask
        throw ParseError("llm_rate: sample " + std::to_string(i) +
                         " had no valid rating after retries: " +
                         content.substr(0, 120));
      }
    }
  }
  return samples;
}

LlmAgent::LlmAgent(LlmBackendConfig cfg, AuditLog* audit)
    : cfg_(std::move(cfg)), audit_(audit) {}

std::vector<int> LlmAgent::rate(const AgentContext& ctx,
                                const ScenarioConfig& scenario, int n_samples) {
  const std::string prompt = render_prompt(ctx, scenario);
  return llm_rate(cfg_, prompt, n_samples, ctx.scale, ctx.rng_seed, audit_);
}

}  // namespace sosim
