#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hedgecone {

using Rat = mpq_class;
using Int = mpz_class;
using Vec = std::vector<Rat>;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline Int parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw ParseError("malformed number: '" + std::string(whole) + "'");
  for (char c : digits)
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError("malformed number: '" + std::string(whole) + "'");
  return Int(std::string(digits), 10);
}

inline Int pow10(unsigned long k) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
  return r;
}

}  // namespace detail

// Accepts "p/q", "-7", "0.125", "-1.5e-3".
inline Rat parse_rat(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw ParseError("empty number");
  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rat result;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Int num = detail::parse_integer(s.substr(0, slash), text);
    Int den = detail::parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
    result = Rat(num, den);
    result.canonicalize();
  } else {
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view exp = s.substr(e + 1);
      bool exp_neg = false;
      if (!exp.empty() && (exp.front() == '-' || exp.front() == '+')) {
        exp_neg = exp.front() == '-';
        exp.remove_prefix(1);
      }
      Int ev = detail::parse_integer(exp, text);
      if (!ev.fits_slong_p() || abs(ev) > 100000) throw ParseError("exponent out of range: '" + std::string(text) + "'");
      exponent = exp_neg ? -ev.get_si() : ev.get_si();
      s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
      std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
      if (ip.empty() && fp.empty()) throw ParseError("malformed number: '" + std::string(text) + "'");
      digits = std::string(ip) + std::string(fp);
      exponent -= static_cast<long>(fp.size());
    } else {
      digits = std::string(s);
    }
    Int mantissa = detail::parse_integer(digits, text);
    if (exponent >= 0) {
      result = Rat(mantissa * detail::pow10(static_cast<unsigned long>(exponent)));
    } else {
      result = Rat(mantissa, detail::pow10(static_cast<unsigned long>(-exponent)));
      result.canonicalize();
    }
  }
  if (negative) result = -result;
  return result;
}

// p/q in lowest terms; the two-argument mpq constructor does not reduce.
inline Rat make_rat(long p, long q) {
  if (q == 0) throw ParseError("zero denominator");
  Rat r(p, q);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

// Round half to even at `places` decimals.
inline std::string to_decimal(const Rat& r, int places = 3) {
  if (places < 0) places = 0;
  Int scale = detail::pow10(static_cast<unsigned long>(places));
  Rat scaled = abs(r) * scale;
  Int q = scaled.get_num() / scaled.get_den();
  Rat frac = scaled - Rat(q);
  int c = cmp(frac, Rat(1, 2));
  if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;
  std::string digits = q.get_str();
  if (static_cast<int>(digits.size()) <= places) digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
  std::string out;
  if (r < 0 && q != 0) out += '-';
  out += digits.substr(0, digits.size() - static_cast<std::size_t>(places));
  if (places > 0) out += "." + digits.substr(digits.size() - static_cast<std::size_t>(places));
  return out;
}

// ---- vectors ----

inline Vec zeros(std::size_t d) { return Vec(d, Rat(0)); }

inline Vec unit(std::size_t d, std::size_t i) {
  Vec v = zeros(d);
  v.at(i) = 1;
  return v;
}

inline void require_same_dim(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
}

inline Rat dot(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

inline Vec operator+(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  require_same_dim(a, b);
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec operator-(const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

inline Vec operator*(const Rat& s, const Vec& a) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

inline Vec& operator+=(Vec& a, const Vec& b) {
  require_same_dim(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

inline Vec& operator-=(Vec& a, const Vec& b) {
  require_same_dim(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

inline bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Rat& x) { return sgn(x) == 0; });
}

inline bool lex_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const Rat& x, const Rat& y) { return cmp(x, y) < 0; });
}

// Positive multiple with coprime integer entries; zero stays zero.
inline Vec primitive(const Vec& v) {
  Int l = 1, g = 0;
  for (const Rat& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  Vec r(v.size());
  std::vector<Int> ints(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    ints[i] = v[i].get_num() * (l / v[i].get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ints[i].get_mpz_t());
  }
  if (g == 0) return v;
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = Rat(ints[i] / g);
  return r;
}

inline std::string to_string(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += to_string(v[i]);
  }
  return s + ")";
}

}  // namespace hedgecone
