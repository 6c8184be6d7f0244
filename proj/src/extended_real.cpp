#include "fitevo/extended_real.hpp"

#include <charconv>
#include <system_error>

#include "fitevo/errors.hpp"

namespace fitevo {

std::string to_string(const ExtendedReal& x) {
  if (x.is_plus_infinity()) return "+inf";
  if (x.is_minus_infinity()) return "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x.value());
  return std::string(buf, end);
}

ExtendedReal parse_extended_real(const std::string& text) {
  if (text == "+inf" || text == "inf" || text == "+infinity" ||
      text == "infinity") {
    return ExtendedReal::plus_infinity();
  }
  if (text == "-inf" || text == "-infinity") {
    return ExtendedReal::minus_infinity();
  }
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw InvalidInput("not an extended real: '" + text + "'");
  }
  return ExtendedReal(v);
}

std::ostream& operator<<(std::ostream& os, const ExtendedReal& x) {
  return os << to_string(x);
}

}  // namespace fitevo
