#include <cstdio>
#include <cstring>
#include <string>

#include "zwm/acceptance.hpp"

int main(int argc, char** argv) {
  zwm::AcceptanceOptions opt;
  bool strict = false;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--slow")) opt.tier = zwm::Tier::Slow;
    else if (!std::strcmp(argv[i], "--strict")) strict = true;
    else if (!std::strcmp(argv[i], "--only") && i + 1 < argc) opt.only.push_back(std::stoi(argv[++i]));
  }
  opt.on_result = [](const zwm::CriterionResult& r) {
    std::printf("%s\n", zwm::format_result(r).c_str());
    std::fflush(stdout);
  };
  auto results = zwm::run_acceptance(opt);
  int failed = 0;
  for (auto& r : results) failed += !r.pass;
  std::printf("%zu criteria, %d passed, %d failed\n", results.size(), int(results.size()) - failed, failed);
  return strict && failed ? 2 : 0;
}
