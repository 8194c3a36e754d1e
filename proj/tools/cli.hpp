#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace entpca::cli {

// Exit codes: 0 success, 1 numeric/internal failure, 2 contract violation
// (bad flags, bad ranks, bad indices), 3 ingestion or persistence failure.
enum ExitCode : int { kOk = 0, kInternal = 1, kContract = 2, kIngestion = 3 };

// `args` excludes the program name. Data goes to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace entpca::cli
