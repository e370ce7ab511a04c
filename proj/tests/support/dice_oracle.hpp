#pragma once

#include <cctype>
#include <string>
#include <vector>

namespace modelforge::testing {

// Reference Dice: count shared bigrams by pairing each bigram of `a` with an
// unused equal bigram of `b`. ASCII inputs only.
inline double dice_oracle(std::string a, std::string b) {
  auto fold = [](std::string s) {
    std::string out;
    for (char c : s) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!out.empty() && out.back() != ' ') out += ' ';
      } else {
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
  };
  a = fold(a);
  b = fold(b);
  if (a.size() < 2 || b.size() < 2) return a == b ? 1.0 : 0.0;
  std::vector<std::string> x, y;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) x.push_back(a.substr(i, 2));
  for (std::size_t i = 0; i + 1 < b.size(); ++i) y.push_back(b.substr(i, 2));
  std::vector<bool> used(y.size(), false);
  int shared = 0;
  for (const auto& bg : x) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (!used[j] && y[j] == bg) {
        used[j] = true;
        ++shared;
        break;
      }
    }
  }
  return 2.0 * shared / static_cast<double>(x.size() + y.size());
}

}  // namespace modelforge::testing
