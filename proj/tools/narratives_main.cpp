// Command line driver: one subcommand per pipeline stage.
//
// Exit codes: 0 success, 1 input error (bad paths, malformed records or
// config, missing prerequisite artifacts), 2 internal error.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "narr/pipeline.hpp"

namespace {

int run_stage(const std::string& stage_name, const std::string& config_path,
              std::optional<uint64_t> seed, const std::string& slice, bool force,
              bool lenient, int threads) {
  narr::PipelineConfig config = narr::PipelineConfig::from_file(config_path);
  if (seed) config.seed = *seed;
  if (lenient) config.lenient = true;
  if (threads > 0) config.threads = threads;

  narr::Pipeline pipeline(std::move(config));
  const std::optional<std::string> only_slice =
      slice.empty() ? std::nullopt : std::optional<std::string>(slice);
  const narr::RunReport report =
      pipeline.run(narr::stage_from_string(stage_name), only_slice, force);
  std::cerr << "[narratives] " << stage_name << ": " << report.executed()
            << " stage(s) run, " << report.skipped() << " cached\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Narrative analysis pipeline for dated, source-tagged news corpora"};
  app.require_subcommand(1);

  std::string config_path;
  std::string slice;
  std::optional<uint64_t> seed;
  bool force = false;
  bool lenient = false;
  int threads = 0;

  const std::vector<std::string> stages = {"ingest", "topics", "summarize",
                                           "terms",  "embed",  "graphs",
                                           "flows",  "stats",  "render", "all"};
  std::string chosen;
  for (const auto& name : stages) {
    auto* sub = app.add_subcommand(name, "Run the '" + name + "' stage");
    sub->add_option("--config", config_path, "Pipeline config file (JSON)")
        ->required();
    sub->add_option("--seed", seed, "Override the config's global seed");
    sub->add_option("--slice", slice,
                    "Restrict to one slice id (e.g. far-right-2016) or one "
                    "orientation (e.g. far-right)");
    sub->add_flag("--force", force, "Overwrite artifacts after a config change");
    sub->add_flag("--lenient", lenient, "Skip malformed corpus records");
    sub->add_option("--threads", threads, "Worker threads for independent slices");
    sub->callback([&chosen, name] { chosen = name; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    return run_stage(chosen, config_path, seed, slice, force, lenient, threads);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
