#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kinavg/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Run the acceptance criteria and print one line per criterion"};
  std::vector<int> only;
  std::string out_dir;
  bool deterministic = false;
  app.add_option("--only", only, "criterion ids to run (default: all)")->check(CLI::Range(1, 11));
  app.add_option("--output-dir", out_dir, "write acceptance.json here");
  app.add_flag("--deterministic", deterministic, "omit the timestamp from acceptance.json");
  CLI11_PARSE(app, argc, argv);

  if (only.empty()) only = kinavg::criterion_ids();
  kinavg::json all = kinavg::json::array();
  int failed = 0;
  for (int id : only) {
    const auto r = kinavg::run_criterion(id);
    std::cout << kinavg::summary_line(r) << std::endl;
    if (!r.pass()) ++failed;
    all.push_back(kinavg::to_json(r));
  }
  std::cout << (only.size() - failed) << "/" << only.size() << " criteria passed" << std::endl;
  if (!out_dir.empty()) {
    kinavg::ReportSink{out_dir, deterministic}.write("acceptance", {{"criteria", all}});
  }
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
