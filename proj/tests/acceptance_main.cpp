// Prints one PASS/FAIL line per acceptance criterion; exit 1 if any fails.
#include <iostream>
#include <vector>

#include "CLI11.hpp"

#include "tmm/acceptance.hpp"
#include "tmm/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  bool verbose = false;
  app.add_option("--only", only, "criterion ids (default all)")->check(CLI::Range(1, tmm::criterion_count));
  app.add_flag("--verbose", verbose, "print details under each line");
  CLI11_PARSE(app, argc, argv);

  if (only.empty())
    for (int i = 1; i <= tmm::criterion_count; ++i) only.push_back(i);
  bool all = true;
  for (int id : only) {
    const auto r = tmm::run_criterion(id);
    all = all && r.pass;
    std::cout << tmm::format_line(r) << "  (" << r.seconds << " s)\n";
    if (verbose || !r.pass)
      for (const auto& d : r.details) std::cout << "    " << d << "\n";
    std::cout.flush();
  }
  return all ? 0 : 1;
}
