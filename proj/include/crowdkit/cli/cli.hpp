#pragma once

#include <string>
#include <vector>

namespace crowdkit {

// Batch front-end: parses argv, dispatches to one subcommand, writes outputs
// under --out. Returns the process exit code: 0 success, 1 input error,
// 2 when --strict turns degenerate-data warnings into failures.
//
// Subcommands: calibrate-sensors, track, stitch, evaluate, fit, validate,
// synth. Common flags: --config <file>, --seed <u64>, --strict, --out <dir>.
int run_cli(int argc, const char* const* argv);

}  // namespace crowdkit
