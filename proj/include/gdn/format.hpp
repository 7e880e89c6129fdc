#pragma once

#include <string>

namespace gdn {

/// Shortest round-trip text for a double, `.` decimal regardless of locale.
std::string format_double(double value);

}  // namespace gdn
