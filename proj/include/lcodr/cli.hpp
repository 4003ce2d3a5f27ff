#pragma once

#include <filesystem>
#include <iosfwd>

/// Batch front-end behind the `lcodr` executable.
namespace lcodr::cli {

enum class ExitCode : int { Ok = 0, Usage = 1, Config = 2, Data = 3, Internal = 4 };

/// Runs one subcommand (`run`, `vf`, `mc`, `synth`). Failures print a single
/// `error[usage|config|data|internal]: <message>` line on `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Directory holding the bundled config, sample series and LCOS table.
std::filesystem::path bundled_data_dir();

}  // namespace lcodr::cli
