// chillops — cooling-load forecasting and chiller-plant optimization toolkit.
//
// One subcommand per pipeline stage; a single JSON run-config file carries
// every tunable so any stage can be re-run bit-identically.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chillops/common.hpp"
#include "chillops/config.hpp"
#include "chillops/pipeline.hpp"

using namespace chillops;

int main(int argc, char** argv) {
  CLI::App app{"cooling-load forecasting and chiller dispatch toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  app.add_option("-c,--config", config_path, "run-config JSON file");
  app.add_option("--out-dir", out_dir, "override paths.out_dir");

  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  auto* filter = app.add_subcommand("filter", "compute and denoise the load series");
  auto* cluster = app.add_subcommand("cluster", "fit the weather cluster models");
  auto* features = app.add_subcommand("features", "assemble the feature sets");

  std::string set_name, family;
  auto* train = app.add_subcommand("train", "train the forecasting models");
  train->add_option("--set", set_name, "restrict to one feature set");
  train->add_option("--family", family, "restrict to mlp or lstm");

  std::string pset = "K2-N1", pfamily = "mlp";
  auto* predict = app.add_subcommand("predict", "predict with a trained model");
  predict->add_option("--set", pset, "feature set name");
  predict->add_option("--family", pfamily, "mlp or lstm");

  std::string loads_path;
  bool with_oracle = false;
  auto* disp = app.add_subcommand("dispatch", "optimize per-slot chiller loadings");
  disp->add_option("--loads", loads_path, "load series file (default: filtered)");
  disp->add_flag("--oracle", with_oracle,
                 "add the exhaustive-optimum comparison column");

  std::string tes_loads;
  std::vector<std::string> proposal_files;
  auto* tes_cmd = app.add_subcommand("tes", "evaluate storage design proposals");
  tes_cmd->add_option("--loads", tes_loads, "day profile (default: filtered peak day)");
  tes_cmd->add_option("--proposal", proposal_files, "proposal file(s), baseline first");

  auto* report = app.add_subcommand("report", "run the whole pipeline");

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = config_path.empty() ? RunConfig()
                                        : RunConfig::from_file(config_path);
    if (!out_dir.empty()) cfg.set("paths.out_dir", out_dir);

    if (synth->parsed()) return cli::cmd_synth(cfg);
    if (filter->parsed()) return cli::cmd_filter(cfg);
    if (cluster->parsed()) return cli::cmd_cluster(cfg);
    if (features->parsed()) return cli::cmd_features(cfg);
    if (train->parsed()) return cli::cmd_train(cfg, set_name, family);
    if (predict->parsed()) return cli::cmd_predict(cfg, pset, pfamily);
    if (disp->parsed()) return cli::cmd_dispatch(cfg, loads_path, with_oracle);
    if (tes_cmd->parsed()) return cli::cmd_tes(cfg, tes_loads, proposal_files);
    if (report->parsed()) return cli::cmd_report(cfg);
  } catch (const Error& e) {
    std::cerr << "error[" << e.category() << "]: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
