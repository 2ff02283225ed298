// Batch runner: processes each settings file in turn.
#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "digholo/error.hpp"
#include "digholo/settings.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Off-axis digital holography batch runner"};
  std::vector<std::string> files;
  app.add_option("settings", files, "Tab-delimited settings file(s)")->required();
  CLI11_PARSE(app, argc, argv);

  int status = 0;
  for (const auto& f : files) {
    const digholo::ErrorCode err = digholo::runBatchFromConfigFile(f);
    if (err != digholo::ErrorCode::SUCCESS) {
      std::fprintf(stderr, "%s: %s\n", f.c_str(), digholo::errorName(err));
      if (status == 0) status = static_cast<int>(err);
    }
  }
  return status;
}
