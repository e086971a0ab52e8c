#pragma once

#include <string>
#include <vector>

namespace restor {

/// Exit status: 0 success, 2 usage, 3 invalid model, 4 refusal or domain
/// error, 5 numerical failure. Errors are written to stdout as
/// {"error": {"code", "message"}}.
int dispatch(int argc, const char* const* argv);
int dispatch(const std::vector<std::string>& args);

}  // namespace restor
