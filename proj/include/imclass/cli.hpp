#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace imclass::cli {

// Subcommand entry points. Each returns a process exit code; output and
// diagnostics go to the given streams so the commands stay testable.
int run_train(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_predict(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_genfeature(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_stats(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_tolibsvm(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Dispatch on args[0]; prints usage and returns nonzero when no or an
// unknown subcommand is given.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace imclass::cli
