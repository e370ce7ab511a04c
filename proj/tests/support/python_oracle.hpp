#pragma once

// Runs generated Python through the system interpreter and collects one
// result line per call.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace modelforge::testing {

inline bool python_available() { return std::system("python3 -c pass >/dev/null 2>&1") == 0; }

/// `program` must print one line per result. Returns stdout split by lines.
inline std::vector<std::string> run_python(const std::string& program) {
  auto path = std::filesystem::temp_directory_path() / ("mf_oracle_" + std::to_string(::getpid()) + ".py");
  {
    std::ofstream out(path);
    out << program;
  }
  std::vector<std::string> lines;
  std::string cmd = "python3 " + path.string() + " 2>&1";
  if (FILE* p = popen(cmd.c_str(), "r")) {
    std::string cur;
    int c;
    while ((c = std::fgetc(p)) != EOF) {
      if (c == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else {
        cur += char(c);
      }
    }
    if (!cur.empty()) lines.push_back(cur);
    pclose(p);
  }
  std::filesystem::remove(path);
  return lines;
}

/// Wraps a call so the line is either a float repr or "ERR". Complex and
/// non-finite results count as errors; TypeError only arises from complex
/// intermediates.
inline std::string python_probe(const std::string& call) {
  return "try:\n"
         "    _r = " + call + "\n"
         "    print('ERR' if isinstance(_r, complex) or not math.isfinite(_r) else repr(float(_r)))\n"
         "except (ArithmeticError, ValueError, TypeError):\n"
         "    print('ERR')\n";
}

}  // namespace modelforge::testing
