#pragma once

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

struct ProcessResult {
  int exit_code = -1;
  std::string out;
};

// Runs through /bin/sh; stderr is folded into the captured output.
inline ProcessResult run_command(const std::string& cmd) {
  ProcessResult r;
  std::FILE* p = ::popen((cmd + " 2>&1").c_str(), "r");
  if (p == nullptr) return r;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  const int status = ::pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::string quoted(const std::string& s) { return "'" + s + "'"; }
