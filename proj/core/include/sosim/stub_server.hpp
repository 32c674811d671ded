#pragma once

#include <memory>
#include <string>
#include <vector>

namespace sosim {

// Scripted chat-completion double for offline testing of the LLM path.
//
// Script files are line-based; first matching rule wins, '#' starts a
// comment. Rules:
//   count: <N> => <text>      answer the N-th request (1-based) with <text>
//   match: <regex> => <text>  answer prompts matching <regex> with <text>
//   always: <text>            fallback answer
// A request matched by no rule gets HTTP 404.
struct StubRule {
  enum class Kind { kCount, kMatch, kAlways };
  Kind kind = Kind::kAlways;
  long long count = 0;     // kCount
  std::string pattern;     // kMatch (ECMAScript regex)
  std::string reply;
};

// Throws ConfigError with the offending line number on malformed scripts.
std::vector<StubRule> parse_stub_script(const std::string& text);
std::vector<StubRule> load_stub_script(const std::string& path);

// Serves POST <any path> with the chat-completion wire shape:
// request {model, messages[{role,content}], temperature}; response
// {choices:[{message:{role:"assistant", content:<scripted text>}}]}.
class ScriptedChatServer {
 public:
  explicit ScriptedChatServer(std::vector<StubRule> rules);
  ~ScriptedChatServer();

  ScriptedChatServer(const ScriptedChatServer&) = delete;
  ScriptedChatServer& operator=(const ScriptedChatServer&) = delete;

  // Binds 127.0.0.1:port (port 0 picks a free port) and serves on a
  // background thread. Returns the bound port.
  int start(int port = 0);

  // Serves on the calling thread until stop(); used by the CLI subcommand.
  void run_blocking(int port);

  void stop();

  long long requests_served() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sosim
