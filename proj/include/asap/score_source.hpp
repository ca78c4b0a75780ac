#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "asap/node_snapshot.hpp"

namespace asap {

class ScoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ScoreMap = std::map<std::string, double>;

/// Checks a {part_id: probability} response: every part present, values
/// finite and non-negative, sum 1 ± 1e-6. Throws ScoreError otherwise.
ScoreMap parse_score_response(const nlohmann::json& response, const std::vector<std::string>& parts);

/// Per-part next-removal probabilities for a node. Throws ScoreError when the
/// source cannot answer.
class ScoreSource {
 public:
  virtual ~ScoreSource() = default;
  virtual ScoreMap scores(const NodeSnapshot& node) = 0;
};

/// JSON lines of {"assembly_id", "node_key", "scores": {part: p}}.
class ScoresFileSource : public ScoreSource {
 public:
  explicit ScoresFileSource(const std::filesystem::path& path);
  ScoreMap scores(const NodeSnapshot& node) override;

 private:
  std::map<std::pair<std::string, std::string>, nlohmann::json> table_;
};

/// Line-delimited request/response over a child process's stdin/stdout: one
/// snapshot JSON per line in, one score-map JSON per line out.
class SubprocessScoreSource : public ScoreSource {
 public:
  SubprocessScoreSource(std::string command, double timeout_s = 10.0);
  ~SubprocessScoreSource() override;
  SubprocessScoreSource(const SubprocessScoreSource&) = delete;
  SubprocessScoreSource& operator=(const SubprocessScoreSource&) = delete;

  ScoreMap scores(const NodeSnapshot& node) override;

 private:
  void shutdown();
  std::string read_line();

  std::string command_;
  double timeout_s_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  bool broken_ = false;
  std::string buffer_;
};

}  // namespace asap
