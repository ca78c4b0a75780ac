#include "asap/score_source.hpp"

#include <cerrno>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstring>
#include <fstream>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace asap {

ScoreMap parse_score_response(const nlohmann::json& response, const std::vector<std::string>& parts) {
  if (!response.is_object()) throw ScoreError("score response is not a JSON object");
  ScoreMap out;
  double sum = 0.0;
  for (const auto& id : parts) {
    auto it = response.find(id);
    if (it == response.end()) throw ScoreError("score response lacks part '" + id + "'");
    if (!it->is_number()) throw ScoreError("score for part '" + id + "' is not a number");
    const double v = it->get<double>();
    if (!std::isfinite(v) || v < 0.0) throw ScoreError("score for part '" + id + "' is not a probability");
    out[id] = v;
    sum += v;
  }
  if (response.size() != parts.size()) throw ScoreError("score response names parts outside the node");
  if (std::abs(sum - 1.0) > 1e-6) throw ScoreError("scores sum to " + std::to_string(sum) + ", expected 1");
  return out;
}

ScoresFileSource::ScoresFileSource(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScoreError("cannot open scores file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      table_[{j.at("assembly_id").get<std::string>(), j.at("node_key").get<std::string>()}] = j.at("scores");
    } catch (const nlohmann::json::exception& e) {
      throw ScoreError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

ScoreMap ScoresFileSource::scores(const NodeSnapshot& node) {
  auto it = table_.find({node.assembly_id, node.node_key});
  if (it == table_.end()) throw ScoreError("no scores for node '" + node.node_key + "'");
  return parse_score_response(it->second, node.parts);
}

SubprocessScoreSource::SubprocessScoreSource(std::string command, double timeout_s)
    : command_(std::move(command)), timeout_s_(timeout_s) {
  int in_pipe[2], out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) throw ScoreError("pipe() failed");
  pid_ = fork();
  if (pid_ < 0) throw ScoreError("fork() failed");
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  std::signal(SIGPIPE, SIG_IGN);
}

SubprocessScoreSource::~SubprocessScoreSource() { shutdown(); }

void SubprocessScoreSource::shutdown() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    kill(pid_, SIGTERM);
    waitpid(pid_, nullptr, 0);
    pid_ = -1;
  }
}

std::string SubprocessScoreSource::read_line() {
  using clock = std::chrono::steady_clock;
  const auto deadline = clock::now() + std::chrono::duration<double>(timeout_s_);
  while (true) {
    const auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now()).count();
    if (left <= 0) throw ScoreError("scoring subprocess timed out");
    pollfd pfd{from_child_, POLLIN, 0};
    const int rc = poll(&pfd, 1, static_cast<int>(left));
    if (rc < 0 && errno == EINTR) continue;
    if (rc <= 0) throw ScoreError("scoring subprocess timed out");
    char chunk[4096];
    const ssize_t got = read(from_child_, chunk, sizeof(chunk));
    if (got <= 0) throw ScoreError("scoring subprocess closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(got));
  }
}

ScoreMap SubprocessScoreSource::scores(const NodeSnapshot& node) {
  if (broken_) throw ScoreError("scoring subprocess unavailable");
  try {
    const std::string request = snapshot_to_json(node).dump() + "\n";
    std::size_t sent = 0;
    while (sent < request.size()) {
      const ssize_t w = write(to_child_, request.data() + sent, request.size() - sent);
      if (w < 0 && errno == EINTR) continue;
      if (w <= 0) throw ScoreError("cannot write to scoring subprocess");
      sent += static_cast<std::size_t>(w);
    }
    const std::string line = read_line();
    nlohmann::json response;
    try {
      response = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ScoreError(std::string("malformed score response: ") + e.what());
    }
    return parse_score_response(response, node.parts);
  } catch (const ScoreError&) {
    broken_ = true;
    shutdown();
    throw;
  }
}

}  // namespace asap
