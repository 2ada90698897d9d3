#pragma once

#include <string>
#include <vector>

#include "chillops/config.hpp"

namespace chillops::cli {

// Subcommand entry points. Each reads its declared inputs, writes its
// artifacts under paths.out_dir and never mutates inputs. The CLI wrapper
// maps thrown errors onto exit codes.

int cmd_synth(const RunConfig& cfg);
int cmd_filter(const RunConfig& cfg);
int cmd_cluster(const RunConfig& cfg);
int cmd_features(const RunConfig& cfg);

/// Empty filters mean every feature set / both families.
int cmd_train(const RunConfig& cfg, const std::string& set_filter = "",
              const std::string& family_filter = "");
int cmd_predict(const RunConfig& cfg, const std::string& set,
                const std::string& family);

int cmd_dispatch(const RunConfig& cfg, const std::string& loads_path = "",
                 bool with_oracle = false);
int cmd_tes(const RunConfig& cfg, const std::string& loads_path = "",
            const std::vector<std::string>& proposal_files = {});

/// The whole pipeline: data (or synthesis), filtering, clustering, the nine
/// feature sets, training both families, prediction with the best model,
/// peak-day dispatch, and the storage design comparison.
int cmd_report(const RunConfig& cfg);

}  // namespace chillops::cli
