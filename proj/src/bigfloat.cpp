#include "morsewell/bigfloat.hpp"

#include <vector>

namespace morsewell {

std::string BigFloat::str(int digits) const
{
    std::vector<char> buf(static_cast<size_t>(digits) + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
    return std::string(buf.data());
}

}  // namespace morsewell
