#pragma once

#include <string>
#include <vector>

#include "bowendim/verify.hpp"

namespace bowendim {

// writes one structured report file per claim, CSV evidence, and a human
// summary under output_dir; evidence paths inside the reports stay relative so
// identical runs yield byte-identical files. Returns the files written,
// relative to output_dir, and fills each report's artifact list.
std::vector<std::string> emit_report(std::vector<VerificationReport>& reports, const std::string& output_dir);

} // namespace bowendim
