#pragma once

#include "criteria.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace spdekit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitIo = 3;

// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string sha256_hex(std::string_view data);

// Criterion 11: runs every stochastic subcommand twice under the same seed in
// `workdir` and compares the manifests.
validation::Report determinism_report(const std::filesystem::path& workdir);

}  // namespace spdekit::cli
