#pragma once

// Adapter for an external Prover9 binary: one subprocess per call.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sylo/error.hpp"
#include "sylo/fol/prover9.hpp"
#include "sylo/prover/verdict.hpp"

extern char** environ;

namespace sylo::prover {

struct ExternalProverConfig {
  std::filesystem::path binary = "prover9";
  std::chrono::milliseconds timeout{10000};
};

/// Prover9 input with premises as assumptions and the conclusion as goal.
inline std::string prover9_input(const ProverProblem& problem) {
  fol::Prover9Names names(problem.all_sentences());
  std::string out = "formulas(assumptions).\n";
  for (const auto& p : problem.premises) out += "  " + fol::render_prover9(p, names) + "\n";
  out += "end_of_list.\n\nformulas(goals).\n";
  out += "  " + fol::render_prover9(problem.conclusion, names) + "\n";
  out += "end_of_list.\n";
  return out;
}

/// Classifies Prover9 standard output.
inline ProverVerdict interpret_prover9_output(const std::string& output) {
  if (output.find("THEOREM PROVED") != std::string::npos) return ProverVerdict::entailed(Engine::ExternalProver9);
  if (output.find("SEARCH FAILED") != std::string::npos) {
    if (output.find("max_seconds") != std::string::npos || output.find("max_megs") != std::string::npos)
      throw Error(Errc::Timeout, "prover9 stopped on a resource limit");
    return ProverVerdict::not_entailed_external();
  }
  throw Error(Errc::UnparseableProverOutput, "no THEOREM PROVED / SEARCH FAILED marker in output");
}

namespace detail {

class TempFile {
 public:
  explicit TempFile(const std::string& content) {
    std::string templ = (std::filesystem::temp_directory_path() / "sylo-p9-XXXXXX").string();
    std::vector<char> buf(templ.begin(), templ.end());
    buf.push_back('\0');
    int fd = ::mkstemp(buf.data());
    if (fd < 0) throw Error(Errc::Io, "cannot create temporary prover input");
    path_ = buf.data();
    std::size_t off = 0;
    while (off < content.size()) {
      auto n = ::write(fd, content.data() + off, content.size() - off);
      if (n <= 0) {
        ::close(fd);
        throw Error(Errc::Io, "cannot write temporary prover input");
      }
      off += static_cast<std::size_t>(n);
    }
    ::close(fd);
  }
  ~TempFile() { std::remove(path_.c_str()); }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace detail

inline ProverVerdict prove_external(const ProverProblem& problem, const ExternalProverConfig& cfg) {
  detail::TempFile input(prover9_input(problem));

  int pipefd[2];
  if (::pipe(pipefd) != 0) throw Error(Errc::SpawnError, "pipe() failed");

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, pipefd[1], STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, pipefd[1], STDERR_FILENO);
  posix_spawn_file_actions_addclose(&actions, pipefd[0]);
  posix_spawn_file_actions_addclose(&actions, pipefd[1]);

  std::string bin = cfg.binary.string();
  std::vector<std::string> args = {bin, "-f", input.path()};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  pid_t pid = 0;
  int rc = ::posix_spawnp(&pid, bin.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(pipefd[1]);
  if (rc != 0) {
    ::close(pipefd[0]);
    throw Error(Errc::SpawnError, "cannot execute '" + bin + "'");
  }

  std::string output;
  auto deadline = std::chrono::steady_clock::now() + cfg.timeout;
  bool timed_out = false;
  char buf[4096];
  while (true) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      timed_out = true;
      break;
    }
    pollfd pfd{pipefd[0], POLLIN, 0};
    int pr = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (pr == 0) {
      timed_out = true;
      break;
    }
    if (pr < 0) continue;
    auto n = ::read(pipefd[0], buf, sizeof buf);
    if (n <= 0) break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  ::close(pipefd[0]);

  int status = 0;
  if (timed_out) {
    ::kill(pid, SIGKILL);
    ::waitpid(pid, &status, 0);
    throw Error(Errc::Timeout, "prover9 exceeded " + std::to_string(cfg.timeout.count()) + " ms");
  }
  ::waitpid(pid, &status, 0);
  // posix_spawnp reports exec failure of a missing binary as exit status 127.
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127 && output.empty())
    throw Error(Errc::SpawnError, "cannot execute '" + bin + "'");
  return interpret_prover9_output(output);
}

}  // namespace sylo::prover
