#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

#include "modvar/rng.hpp"

namespace modvar {

// Thrown on bad user input (unparseable files, mismatched shapes, ...).
class domain_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when an internal double-entry check fails; never expected.
class internal_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Largest prime below 2^31. Large enough that random samples behave like
// generic points for every dimension this library is used at.
inline constexpr std::uint64_t kDefaultPrime = 2147483647ULL;

// F_p with p < 2^31, elements stored canonically in [0, p).
struct PrimeField {
  using Elt = std::uint64_t;

  std::uint64_t p = kDefaultPrime;

  Elt zero() const { return 0; }
  Elt one() const { return 1 % p; }
  bool is_zero(Elt a) const { return a == 0; }
  bool eq(Elt a, Elt b) const { return a == b; }

  Elt add(Elt a, Elt b) const {
    Elt s = a + b;
    return s >= p ? s - p : s;
  }
  Elt sub(Elt a, Elt b) const { return a >= b ? a - b : a + p - b; }
  Elt neg(Elt a) const { return a == 0 ? 0 : p - a; }
  Elt mul(Elt a, Elt b) const { return (a * b) % p; }

  Elt inv(Elt a) const {
    if (a == 0) throw domain_error("PrimeField: inverse of zero");
    // extended Euclid on (a, p)
    std::int64_t t = 0, newt = 1;
    std::int64_t r = static_cast<std::int64_t>(p);
    std::int64_t newr = static_cast<std::int64_t>(a);
    while (newr != 0) {
      std::int64_t q = r / newr;
      std::int64_t tmp = t - q * newt;
      t = newt;
      newt = tmp;
      tmp = r - q * newr;
      r = newr;
      newr = tmp;
    }
    if (r != 1) throw domain_error("PrimeField: modulus not prime");
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<Elt>(t);
  }

  Elt from_int(long long v) const {
    long long m = v % static_cast<long long>(p);
    if (m < 0) m += static_cast<long long>(p);
    return static_cast<Elt>(m);
  }

  Elt from_fraction(long long num, long long den) const {
    Elt d = from_int(den);
    if (d == 0) throw domain_error("PrimeField: fraction denominator divisible by p");
    return mul(from_int(num), inv(d));
  }

  Elt sample(Rng& rng) const { return rng.uniform(p); }

  std::string to_string(Elt a) const { return std::to_string(a); }

  Elt parse(const std::string& s) const {
    std::size_t slash = s.find('/');
    if (slash == std::string::npos) return from_int(std::stoll(s));
    return from_fraction(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  }

  std::string name() const { return "GF(" + std::to_string(p) + ")"; }
};

// Exact rationals via GMP. Random sampling draws small integers; that is
// enough to hit generic strata while keeping intermediate growth tame.
struct RationalField {
  using Elt = mpq_class;

  static constexpr long kSampleRange = 9;  // samples lie in [-9, 9]

  Elt zero() const { return Elt(0); }
  Elt one() const { return Elt(1); }
  bool is_zero(const Elt& a) const { return sgn(a) == 0; }
  bool eq(const Elt& a, const Elt& b) const { return a == b; }

  Elt add(const Elt& a, const Elt& b) const { return a + b; }
  Elt sub(const Elt& a, const Elt& b) const { return a - b; }
  Elt neg(const Elt& a) const { return -a; }
  Elt mul(const Elt& a, const Elt& b) const { return a * b; }

  Elt inv(const Elt& a) const {
    if (is_zero(a)) throw domain_error("RationalField: inverse of zero");
    return Elt(1) / a;
  }

  Elt from_int(long long v) const { return Elt(static_cast<long>(v)); }

  Elt from_fraction(long long num, long long den) const {
    if (den == 0) throw domain_error("RationalField: zero denominator");
    Elt q(static_cast<long>(num), static_cast<long>(den));
    q.canonicalize();
    return q;
  }

  Elt sample(Rng& rng) const {
    return Elt(static_cast<long>(rng.uniform(2 * kSampleRange + 1)) - kSampleRange);
  }

  std::string to_string(const Elt& a) const { return a.get_str(); }

  Elt parse(const std::string& s) const {
    Elt q(s);
    q.canonicalize();
    return q;
  }

  std::string name() const { return "QQ"; }
};

// Runtime field selector used by the CLI and the file formats.
struct FieldSpec {
  enum class Kind { prime, rationals };
  Kind kind = Kind::prime;
  std::uint64_t p = kDefaultPrime;

  static FieldSpec prime(std::uint64_t p = kDefaultPrime) { return {Kind::prime, p}; }
  static FieldSpec rationals() { return {Kind::rationals, 0}; }

  std::string name() const {
    return kind == Kind::prime ? PrimeField{p}.name() : RationalField{}.name();
  }

  bool operator==(const FieldSpec&) const = default;
};

// Parses "rat", "p" (default prime) or an explicit prime modulus.
FieldSpec parse_field_spec(const std::string& text);

template <class Fn>
auto with_field(const FieldSpec& fs, Fn&& fn) {
  if (fs.kind == FieldSpec::Kind::prime) return fn(PrimeField{fs.p});
  return fn(RationalField{});
}

}  // namespace modvar
