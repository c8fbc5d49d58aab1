#pragma once

#include <string>

namespace stablecone {

/// Shortest decimal text that round-trips to the same double ("6", "-0.5",
/// "0.49319696191607209"). Negative zero prints as "0".
std::string format_number(double x);

}  // namespace stablecone
