#pragma once

#include <string>

#include "ckn/report.hpp"

namespace ckn {

// Implementations behind the CLI verbs. Each writes its outputs under
// out_dir and returns the process exit code for the success/aborted paths;
// error exits come from exceptions mapped via exit_code_for.
int cmd_run(const std::string& config_path, const std::string& out_dir);
// format: "all" writes JSON and CSV reports, "json" / "csv" restrict to one
// family. The summary line is printed either way.
int cmd_analyze(const std::string& config_path, const std::string& out_dir,
                const std::string& format = "all");
int cmd_plotdata(const std::string& out_dir);
int cmd_calibrate(const std::string& config_path, const std::string& out_dir);

// The full analysis pipeline on an in-memory trajectory (shared by analyze,
// calibrate, and the suite's end-to-end checks).
AnalysisResult analyze_trajectory(const RunConfig& cfg, const Trajectory& u_traj,
                                  const std::string& trajectory_id);

// 2 = configuration/validation, 3 = blow-up, 4 = I/O, 1 = anything else.
int exit_code_for(const std::exception& e);

} // namespace ckn
