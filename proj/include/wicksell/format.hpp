#ifndef WICKSELL_FORMAT_HPP_
#define WICKSELL_FORMAT_HPP_

#include <charconv>
#include <string>

namespace wicksell {

// Shortest decimal text that parses back to exactly `value`.
inline std::string format_double(double value) {
  char buf[32];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

}  // namespace wicksell

#endif  // WICKSELL_FORMAT_HPP_
