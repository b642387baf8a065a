#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace agraph {

/// Exact rational value used for all scores and score deltas. Scores stay
/// exact end to end; rounding happens only in display helpers.
using Ratio = boost::rational<std::int64_t>;

/// "7/8", or "2" when the value is integral.
std::string fraction_string(const Ratio& value);

}  // namespace agraph
