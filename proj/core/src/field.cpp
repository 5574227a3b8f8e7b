#include "modvar/field.hpp"

namespace modvar {

namespace {

bool is_small_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

FieldSpec parse_field_spec(const std::string& text) {
  if (text == "rat" || text == "QQ" || text == "q") return FieldSpec::rationals();
  if (text == "p" || text.empty()) return FieldSpec::prime();
  std::uint64_t p = 0;
  try {
    p = std::stoull(text);
  } catch (const std::exception&) {
    throw domain_error("bad field spec '" + text + "' (expected 'rat', 'p' or a prime)");
  }
  if (p >= (1ULL << 31)) throw domain_error("field modulus must be below 2^31");
  if (!is_small_prime(p)) throw domain_error("field modulus " + text + " is not prime");
  return FieldSpec::prime(p);
}

}  // namespace modvar
