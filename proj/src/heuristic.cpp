#include "rtdc/heuristic.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>

#include <sys/wait.h>
#include <unistd.h>

namespace rtdc {

std::vector<double> CreationOrderHeuristic::rank(const EncodedGraph& g) {
  const auto n = g.active_nodes.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 - static_cast<double>(i) / static_cast<double>(n);
  return out;
}

SubprocessHeuristic::SubprocessHeuristic(std::string command) : command_(std::move(command)) {}

SubprocessHeuristic::~SubprocessHeuristic() { stop(); }

void SubprocessHeuristic::start() {
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) throw HeuristicError(std::string("pipe: ") + std::strerror(errno));
  pid_ = fork();
  if (pid_ < 0) throw HeuristicError(std::string("fork: ") + std::strerror(errno));
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
  to_child_ = fdopen(in_pipe[1], "w");
  from_child_ = fdopen(out_pipe[0], "r");
  std::signal(SIGPIPE, SIG_IGN);

  const auto reply = exchange({{"handshake", {{"protocol", kProtocolVersion}, {"layout", kGraphLayout}}}});
  if (reply.contains("error")) throw HeuristicError("heuristic refused handshake: " + reply["error"].dump());
  if (!reply.value("ok", false)) throw HeuristicError("heuristic handshake not acknowledged: " + reply.dump());
}

nlohmann::json SubprocessHeuristic::exchange(const nlohmann::json& request) {
  if (!to_child_ || !from_child_) throw HeuristicError("heuristic process not running");
  const std::string line = request.dump() + "\n";
  if (std::fwrite(line.data(), 1, line.size(), to_child_) != line.size() || std::fflush(to_child_) != 0)
    throw HeuristicError("heuristic process closed its input");
  std::string reply;
  for (int ch; (ch = std::fgetc(from_child_)) != EOF && ch != '\n';) reply.push_back(static_cast<char>(ch));
  if (reply.empty()) throw HeuristicError("heuristic process sent no reply");
  try {
    return nlohmann::json::parse(reply);
  } catch (const nlohmann::json::exception& e) {
    throw HeuristicError(std::string("malformed heuristic reply: ") + e.what());
  }
}

std::vector<double> SubprocessHeuristic::rank(const EncodedGraph& g) {
  const auto reply = exchange({{"graph", to_json(g)}, {"active", g.active_nodes}});
  if (reply.contains("error")) throw HeuristicError("heuristic error: " + reply["error"].dump());
  if (!reply.contains("probs") || !reply["probs"].is_array()) throw HeuristicError("reply lacks probs");
  std::vector<double> probs;
  for (const auto& p : reply["probs"]) {
    if (!p.is_number()) throw HeuristicError("non-numeric probability");
    const double v = p.get<double>();
    if (!(v >= 0.0 && v <= 1.0)) throw HeuristicError("probability outside [0, 1]");
    probs.push_back(v);
  }
  if (probs.size() != g.active_nodes.size()) throw HeuristicError("probability count does not match active nodes");
  return probs;
}

void SubprocessHeuristic::stop() {
  if (to_child_) std::fclose(to_child_);
  if (from_child_) std::fclose(from_child_);
  to_child_ = from_child_ = nullptr;
  if (pid_ > 0) {
    int status = 0;
    if (waitpid(pid_, &status, WNOHANG) == 0) {
      kill(pid_, SIGTERM);
      waitpid(pid_, &status, 0);
    }
    pid_ = -1;
  }
}

}  // namespace rtdc
