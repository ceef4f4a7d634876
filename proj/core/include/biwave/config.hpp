#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace biwave {

/// Flat `key = value` text block: one pair per line, '#' comments and blank
/// lines ignored.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::string& text);
std::string format_key_values(const KeyValues& kv);

/// Validated run settings for the CLI. Unknown keys are rejected.
struct RunConfig {
    std::optional<std::string> family;
    std::optional<int> n;
    std::optional<int> bits;  // 0 = unlimited
    std::optional<double> noise_sigma;
    std::optional<std::uint64_t> seed;
    std::optional<double> tau;
    std::optional<double> eps;
    std::optional<std::string> scene_path;
    std::optional<std::string> out_path;
    std::optional<std::string> log_path;
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

}  // namespace biwave
