#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace musicmood::cli {

// Exit codes: 0 success, 1 usage or configuration error, 2 data error.
enum ExitCode : int { kOk = 0, kUsageError = 1, kDataError = 2 };

// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace musicmood::cli
