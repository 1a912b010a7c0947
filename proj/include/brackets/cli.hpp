#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace brackets::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitResource = 3;

// Full command-line entry point (subcommands: run, figures, aep, data).
int cli_main(int argc, const char* const* argv);

// `run <config>`: executes the configured sweep, writing the surface CSV and
// a <output>.manifest.json next to it.
int run_command(const std::string& config_path, std::optional<std::uint64_t> seed_override, bool check_noise);

// `figures <id>`: canned sweeps behind each figure; one CSV per panel.
int figures_command(const std::string& figure_id, bool fast, const std::string& out_dir,
                    const std::string& card_path, const std::string& field_path,
                    std::optional<std::uint64_t> seed_override);

// `aep verify`
int aep_verify_command(double p, double epsilon, const std::string& m_list_csv, const std::string& out_path);

// `data validate <csv>`: recognizes the race-card and field schemas by header.
int data_validate_command(const std::string& csv_path);

}  // namespace brackets::cli
