#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace btcecon::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitValidation = 2;

/// Runs the command-line tool. `args` excludes the program name.
/// Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Library operation names served by each subcommand. Every operation has
/// exactly one home subcommand.
struct OperationBinding {
    std::string_view subcommand;
    std::vector<std::string_view> operations;
};

[[nodiscard]] const std::vector<OperationBinding>& operation_map();

}  // namespace btcecon::cli
