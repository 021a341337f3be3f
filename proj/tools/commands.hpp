#pragma once

#include "css/config.hpp"

namespace css::cli {

enum ExitCode { kPass = 0, kBudgetExceeded = 1, kSolverFailure = 2, kInfeasible = 3 };

int cmd_ground_state(const RunConfig& config);
int cmd_gauge_check(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_solve(const RunConfig& config);
int cmd_sweep(const RunConfig& config);

/// Maps an exception to an exit code after printing it.
int report_failure(const std::exception& e);

}  // namespace css::cli
