#include "sosim/stub_server.hpp"

#include <atomic>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "sosim/errors.hpp"

namespace sosim {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::vector<StubRule> parse_stub_script(const std::string& text) {
  std::vector<StubRule> rules;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto fail = [&](const std::string& why) {
      throw ConfigError("stub script line " + std::to_string(line_no) + ": " +
                        why);
    };

    if (t.rfind("always:", 0) == 0) {
      rules.push_back({StubRule::Kind::kAlways, 0, "", trim(t.substr(7))});
      continue;
    }
    const auto arrow = t.find("=>");
    if (t.rfind("count:", 0) == 0) {
      if (arrow == std::string::npos) fail("count rule needs '=>'");
      const std::string num = trim(t.substr(6, arrow - 6));
      long long n = 0;
      try {
        n = std::stoll(num);
      } catch (const std::exception&) {
        fail("bad count '" + num + "'");
      }
      if (n < 1) fail("count must be >= 1");
      rules.push_back(
          {StubRule::Kind::kCount, n, "", trim(t.substr(arrow + 2))});
      continue;
    }
    if (t.rfind("match:", 0) == 0) {
      if (arrow == std::string::npos) fail("match rule needs '=>'");
      const std::string pattern = trim(t.substr(6, arrow - 6));
      try {
        std::regex probe(pattern);
      } catch (const std::regex_error&) {
        fail("bad regex '" + pattern + "'");
      }
      rules.push_back(
          {StubRule::Kind::kMatch, 0, pattern, trim(t.substr(arrow + 2))});
      continue;
    }
    fail("expected 'count:', 'match:' or 'always:'");
  }
  return rules;
}

std::vector<StubRule> load_stub_script(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read stub script " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_stub_script(buf.str());
}

struct ScriptedChatServer::Impl {
  std::vector<StubRule> rules;
  std::vector<std::regex> compiled;
  httplib::Server server;
  std::thread worker;
  std::atomic<long long> served{0};

  explicit Impl(std::vector<StubRule> r) : rules(std::move(r)) {
    compiled.reserve(rules.size());
    for (const StubRule& rule : rules)
      compiled.emplace_back(rule.kind == StubRule::Kind::kMatch ? rule.pattern
                                                                : std::string("."));
    server.Post(".*", [this](const httplib::Request& req,
                             httplib::Response& res) { handle(req, res); });
  }

  void handle(const httplib::Request& req, httplib::Response& res) {
    const long long request_no = served.fetch_add(1) + 1;

    std::string prompt;
    json body = json::parse(req.body, nullptr, false);
    if (!body.is_discarded() && body.contains("messages") &&
        !body["messages"].empty())
      prompt = body["messages"][0].value("content", "");

    const StubRule* hit = nullptr;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const StubRule& rule = rules[i];
      const bool matches =
          (rule.kind == StubRule::Kind::kAlways) ||
          (rule.kind == StubRule::Kind::kCount && rule.count == request_no) ||
          (rule.kind == StubRule::Kind::kMatch &&
           std::regex_search(prompt, compiled[i]));
      if (matches) {
        hit = &rule;
        break;
      }
    }
    if (!hit) {
      res.status = 404;
      res.set_content("no stub rule matched", "text/plain");
      return;
    }

    json reply;
    reply["id"] = "stub-" + std::to_string(request_no);
    reply["object"] = "chat.completion";
    reply["choices"] = json::array(
        {{{"index", 0},
          {"message", {{"role", "assistant"}, {"content", hit->reply}}},
          {"finish_reason", "stop"}}});
    res.status = 200;
    res.set_content(reply.dump(), "application/json");
  }
};

ScriptedChatServer::ScriptedChatServer(std::vector<StubRule> rules)
    : impl_(std::make_unique<Impl>(std::move(rules))) {}

ScriptedChatServer::~ScriptedChatServer() { stop(); }

int ScriptedChatServer::start(int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port("127.0.0.1");
    if (bound < 0) throw IoError("stub server: cannot bind a port");
    impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  } else {
    if (!impl_->server.bind_to_port("127.0.0.1", port))
      throw IoError("stub server: cannot bind port " + std::to_string(port));
    impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  }
  impl_->server.wait_until_ready();
  return bound;
}

void ScriptedChatServer::run_blocking(int port) {
  if (!impl_->server.bind_to_port("127.0.0.1", port))
    throw IoError("stub server: cannot bind port " + std::to_string(port));
  impl_->server.listen_after_bind();
}

void ScriptedChatServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
  if (impl_ && impl_->worker.joinable()) impl_->worker.join();
}

long long ScriptedChatServer::requests_served() const { return impl_->served; }

}  // namespace sosim
