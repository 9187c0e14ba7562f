// Command-line front end: one system per file, or a directory in batch mode.

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mayer/report.h"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Compatibility and general solutions of overdetermined first-order PDE systems"};
  mayer::RunConfig cfg;
  std::string format = "text";
  std::string batch;
  int max_rounds = 0;
  app.add_option("input", cfg.input, "system file");
  app.add_option("--format", format, "text, json or latex")->check(CLI::IsMember({"text", "json", "latex"}));
  app.add_flag("!--no-verify", cfg.verify, "skip back-substitution");
  app.add_option("--max-rounds", max_rounds, "completion round limit (default: number of variables)")
      ->check(CLI::PositiveNumber);
  app.add_option("--degree", cfg.degree, "degree bound of the polynomial first-integral ansatz")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--seed", cfg.seed, "seed for sampling");
  app.add_option("--timeout-ms", cfg.timeout_ms, "wall-clock limit per system, 0 for none")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--batch", batch, "solve every .pde file in a directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }
  if (max_rounds > 0) cfg.max_rounds = max_rounds;
  cfg.format = format == "json" ? mayer::Format::Json : format == "latex" ? mayer::Format::Latex : mayer::Format::Text;

  if (batch.empty()) {
    if (cfg.input.empty()) {
      std::cerr << "error: an input file or --batch DIR is required\n";
      return 4;
    }
    try {
      mayer::Report r = mayer::run_file(cfg.input, cfg);
      std::cout << mayer::format_report(r, cfg.format);
      return r.exit_code;
    } catch (const mayer::InputError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 4;
    }
  }

  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(batch, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".pde") files.push_back(entry.path());
  }
  if (ec) {
    std::cerr << "error: " << batch << ": " << ec.message() << "\n";
    return 4;
  }
  std::sort(files.begin(), files.end());
  int worst = 0;
  nlohmann::ordered_json all = nlohmann::ordered_json::object();
  for (const auto& f : files) {
    int code;
    try {
      mayer::Report r = mayer::run_file(f.string(), cfg);
      code = r.exit_code;
      if (cfg.format == mayer::Format::Json) {
        all[f.filename().string()] = nlohmann::ordered_json::parse(mayer::format_json(r));
      } else {
        std::cout << "== " << f.filename().string() << "\n" << mayer::format_report(r, cfg.format);
      }
    } catch (const mayer::InputError& e) {
      std::cerr << "error: " << e.what() << "\n";
      code = 4;
    }
    worst = std::max(worst, code);
  }
  if (cfg.format == mayer::Format::Json) std::cout << all.dump(2) << "\n";
  return worst;
}
