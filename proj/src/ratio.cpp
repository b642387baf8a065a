#include "agraph/ratio.hpp"

namespace agraph {

std::string fraction_string(const Ratio& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" +
         std::to_string(value.denominator());
}

}  // namespace agraph
