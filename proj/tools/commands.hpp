#pragma once

#include <string>

#include "config.hpp"

namespace apar::cli {

int cmd_ingest(const RunConfig& config);
int cmd_traits(const RunConfig& config);
int cmd_train(const RunConfig& config);
int cmd_evaluate(const RunConfig& config);
int cmd_sweep(const RunConfig& config);
int cmd_dsw(const RunConfig& config);
int cmd_recommend(const RunConfig& config, const std::string& user_id, int n);

}  // namespace apar::cli
