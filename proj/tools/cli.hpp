#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stablecone/graph.hpp"
#include "stablecone/terms.hpp"

namespace stablecone::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInternal = 3;

/// Entry point of the `stablecone` tool. Reports go to `out` (or to the
/// --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "name=value" per term, in model order.
std::string stats_text(const Graph& g, const ModelSpec& m);

/// Comma-separated numbers, e.g. "-3,-1".
Eigen::VectorXd parse_theta(const std::string& text);

}  // namespace stablecone::cli
