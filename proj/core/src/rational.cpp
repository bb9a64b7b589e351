#include "bayimp/rational.hpp"

#include <cctype>

#include "bayimp/errors.hpp"

namespace bayimp {

namespace {

bool is_integer_token(std::string_view s) {
  if (s.empty()) return false;
  std::size_t k = 0;
  if (s[0] == '-') {
    if (s.size() == 1) return false;
    k = 1;
  }
  for (; k < s.size(); ++k) {
    if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
  }
  return true;
}

}  // namespace

Rat parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!is_integer_token(num) || !is_integer_token(den) || den.front() == '-') {
    throw ScenarioError("non-rational number literal '" + std::string(text) + "'");
  }
  Int p(std::string(num), 10);
  Int q(std::string(den), 10);
  if (q == 0) {
    throw ScenarioError("non-rational number literal '" + std::string(text) +
                        "' (zero denominator)");
  }
  Rat r(p, q);
  r.canonicalize();
  return r;
}

std::string rational_to_string(const Rat& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

}  // namespace bayimp
