#pragma once

#include <string>
#include <vector>

namespace causalbet {

// Formats with 12 significant digits, '.' decimal separator, no locale input.
std::string format_sig(double v);

std::string csv_join(const std::vector<std::string>& cells);

}  // namespace causalbet
