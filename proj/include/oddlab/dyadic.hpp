#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "oddlab/errors.hpp"

namespace oddlab {

// Exact dyadic rational num / 2^log2_den, kept normalized (num odd or zero).
// Dimension functionals and index right-hand sides are stored in this form so
// equality assertions are exact, never floating-point.
struct Dyadic {
  std::int64_t num = 0;
  int log2_den = 0;

  Dyadic() = default;
  Dyadic(std::int64_t n, int l) : num(n), log2_den(l) {
    if (l < 0 || l > 62) throw ConfigError("Dyadic: log2 denominator out of range");
    normalize();
  }
  static Dyadic integer(std::int64_t n) { return Dyadic(n, 0); }

  void normalize() {
    if (num == 0) {
      log2_den = 0;
      return;
    }
    while (log2_den > 0 && num % 2 == 0) {
      num /= 2;
      --log2_den;
    }
  }

  bool is_integer() const { return log2_den == 0; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(std::int64_t{1} << log2_den); }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    const int l = a.log2_den > b.log2_den ? a.log2_den : b.log2_den;
    const std::int64_t na = a.num << (l - a.log2_den);
    const std::int64_t nb = b.num << (l - b.log2_den);
    return Dyadic(na + nb, l);
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + Dyadic(-b.num, b.log2_den); }
  Dyadic operator-() const { return Dyadic(-num, log2_den); }

  friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.num == b.num && a.log2_den == b.log2_den; }
  friend bool operator!=(const Dyadic& a, const Dyadic& b) { return !(a == b); }
  friend bool operator==(const Dyadic& a, std::int64_t n) { return a.log2_den == 0 && a.num == n; }

  std::string str() const {
    if (log2_den == 0) return std::to_string(num);
    return std::to_string(num) + "/2^" + std::to_string(log2_den);
  }
  friend std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.str(); }
};

}  // namespace oddlab
