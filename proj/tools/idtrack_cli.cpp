// Command-line front end: run simulations, rescore traces, and sweep the
// scenario/method/seed grid into summary tables.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "idtrack/idtrack.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::vector<std::uint64_t> parse_seed_list(const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    const auto comma = spec.find(',', pos);
    const std::string token =
        spec.substr(pos, comma == std::string::npos ? spec.size() - pos
                                                    : comma - pos);
    if (!token.empty()) {
      const auto dots = token.find("..");
      try {
        if (dots != std::string::npos) {
          const auto lo = std::stoull(token.substr(0, dots));
          const auto hi = std::stoull(token.substr(dots + 2));
          if (hi < lo)
            throw idtrack::config_error("seed range '" + token + "' is empty");
          for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
        } else {
          seeds.push_back(std::stoull(token));
        }
      } catch (const idtrack::config_error&) {
        throw;
      } catch (const std::exception&) {
        throw idtrack::config_error("bad seed token '" + token + "'");
      }
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (seeds.empty()) throw idtrack::config_error("seed list must not be empty");
  return seeds;
}

void print_report(const idtrack::MetricReport& r) {
  std::cout << "avg_abs_error: " << r.avg_abs_error << " m\n"
            << "frames correct/incorrect/undetected: " << r.frames_correct
            << "/" << r.frames_incorrect << "/" << r.frames_undetected << " ("
            << r.pct_correct() << "% / " << r.pct_incorrect() << "% / "
            << r.pct_undetected() << "%)\n";
  if (r.target_frames > 0)
    std::cout << "target correct/incorrect/undetected: " << r.target_correct
              << "/" << r.target_incorrect << "/" << r.target_undetected
              << " (" << r.pct_target_correct() << "% / "
              << r.pct_target_incorrect() << "% / "
              << r.pct_target_undetected() << "%)\n";
  std::cout << "motp: " << r.motp << " m, mota: " << r.mota
            << " (fp " << r.false_positives << ", fn " << r.false_negatives
            << ", mismatches " << r.mismatches << ", gt " << r.gt_count
            << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identity-aware person tracking simulation harness"};
  app.require_subcommand(1);

  std::string scenario = "exp1";
  std::string method = "snnts";
  std::uint64_t seed = 0;
  std::string config_path;
  std::string out_dir = "out";
  std::string trace_path;
  std::string seed_spec = "0..19";

  auto* simulate = app.add_subcommand(
      "simulate", "Run one scenario/method/seed and write trace + report");
  simulate->add_option("--scenario", scenario, "exp1..exp5");
  simulate->add_option("--method", method, "snnts|facenet|labeled");
  simulate->add_option("--seed", seed, "RNG seed");
  simulate->add_option("--config", config_path, "key=value override file");
  simulate->add_option("--out", out_dir, "output directory");

  auto* evaluate = app.add_subcommand(
      "evaluate", "Recompute the metric report from a trace file");
  evaluate->add_option("--trace", trace_path, "trace .jsonl path")->required();
  evaluate->add_option("--config", config_path,
                       "override metric thresholds (metrics.* keys)");
  evaluate->add_option("--out", out_dir, "optional directory for report CSV");

  auto* compare = app.add_subcommand(
      "compare", "Run the full scenario x method x seed grid");
  compare->add_option("--seeds", seed_spec, "comma list and a..b ranges");
  compare->add_option("--config", config_path, "key=value override file");
  compare->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    idtrack::RunConfig cfg;
    if (!config_path.empty()) idtrack::load_config_file(cfg, config_path);

    if (simulate->parsed()) {
      if (simulate->count("--scenario"))
        cfg.scenario = idtrack::scenario_from_string(scenario);
      if (simulate->count("--method"))
        cfg.method = idtrack::method_from_string(method);
      if (simulate->count("--seed")) cfg.seed = seed;
      const auto out = idtrack::run_and_write(cfg, out_dir);
      std::cout << "trace:  " << out.trace_path.string() << '\n'
                << "report: " << out.report_path.string() << '\n';
      print_report(out.result.report);
    } else if (evaluate->parsed()) {
      const auto parsed = idtrack::read_trace_file(trace_path);
      std::optional<idtrack::MetricThresholds> thresholds;
      if (!config_path.empty()) thresholds = cfg.metrics;
      const auto report = idtrack::evaluate_trace(parsed, thresholds);
      if (evaluate->count("--out")) {
        std::filesystem::create_directories(out_dir);
        const auto path =
            std::filesystem::path(out_dir) /
            (std::filesystem::path(trace_path).stem().string() + ".eval.csv");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw idtrack::io_error("cannot write '" + path.string() + "'");
        idtrack::write_report_csv(out, parsed.header.scenario,
                                  parsed.header.method, parsed.header.seed,
                                  report);
        std::cout << "report: " << path.string() << '\n';
      }
      print_report(report);
    } else if (compare->parsed()) {
      const auto seeds = parse_seed_list(seed_spec);
      const auto grid = idtrack::run_grid(cfg, seeds);
      idtrack::write_compare_outputs(grid, out_dir);
      std::cout << "wrote " << (std::filesystem::path(out_dir) / "table1.csv").string()
                << ", table2.csv, fig8.csv ("
                << idtrack::kAllScenarios.size() * idtrack::kAllMethods.size() *
                       seeds.size()
                << " runs)\n";
    }
  } catch (const idtrack::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const idtrack::io_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}
