#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riskscope/log.hpp"
#include "riskscope/pipeline.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
  long long seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--config", opts->config_path, "pipeline config JSON")->required();
  cmd->add_option("--set", opts->sets, "override a config key, e.g. --set models.gbdt.rounds=50");
  cmd->add_option("--out", opts->out_dir, "output directory (overrides config)");
  cmd->add_option("--seed", opts->seed, "master seed: overrides split/forest/cluster/explain seeds");
}

riskscope::PipelineConfig load_config(const CommonOpts& opts) {
  riskscope::PipelineConfig config = riskscope::PipelineConfig::load(opts.config_path, opts.sets);
  if (!opts.out_dir.empty()) config.output_dir = opts.out_dir;
  if (opts.seed >= 0) {
    const auto s = static_cast<std::uint64_t>(opts.seed);
    config.split_seed = s;
    config.forest.seed = s;
    config.kmeans.seed = s;
    config.explain_seed = s;
  }
  return config;
}

int run(int (*step)(const riskscope::PipelineConfig&), const CommonOpts& opts) {
  try {
    return step(load_config(opts));
  } catch (const riskscope::Error& e) {
    std::fprintf(stderr, "riskscope: %s\n", e.what());
    return riskscope::pipeline::exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "riskscope: %s\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"micro-macro childhood obesity risk pipeline"};
  app.require_subcommand(1);

  struct Verb {
    const char* name;
    const char* help;
    int (*fn)(const riskscope::PipelineConfig&);
  };
  const Verb verbs[] = {
      {"ingest", "parse raw inputs into cohort.csv and indicators.csv", riskscope::pipeline::cmd_ingest},
      {"train-eval", "train the four classifiers and report accuracy/AUC", riskscope::pipeline::cmd_train_eval},
      {"explain", "exact Shapley attributions for the chosen model", riskscope::pipeline::cmd_explain},
      {"envscore", "normalize indicators and compute the state composite", riskscope::pipeline::cmd_envscore},
      {"cluster", "k-means over normalized state profiles", riskscope::pipeline::cmd_cluster},
      {"align", "cross-scale overlay and ranking report", riskscope::pipeline::cmd_align},
      {"map", "annotate a boundary GeoJSON with scores and clusters", riskscope::pipeline::cmd_map},
      {"all", "run the full pipeline in order", riskscope::pipeline::cmd_all},
  };

  std::vector<CommonOpts> opts(std::size(verbs));
  for (std::size_t i = 0; i < std::size(verbs); ++i)
    add_common(app.add_subcommand(verbs[i].name, verbs[i].help), &opts[i]);

  CLI11_PARSE(app, argc, argv);

  const std::string chosen = app.get_subcommands().front()->get_name();
  for (std::size_t i = 0; i < std::size(verbs); ++i)
    if (chosen == verbs[i].name) return run(verbs[i].fn, opts[i]);
  return 1;
}
