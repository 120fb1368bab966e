#include "rholap/rational.hpp"

#include "rholap/errors.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cmath>
#include <numeric>
#include <system_error>

namespace rholap {

namespace {

mpz_class pow10(unsigned long k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, k);
  return r;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    s = s.substr(0, e);
    const char* first = exp_text.data();
    const char* last = first + exp_text.size();
    if (!exp_text.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, exponent);
    if (ec != std::errc() || ptr != last || first == last)
      throw InputError("malformed exponent in number: " + std::string(text));
  }
  std::string digits;
  long frac_len = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot);
    std::string_view fp = s.substr(dot + 1);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) ||
        (ip.empty() && fp.empty()))
      throw InputError("malformed number: " + std::string(text));
    digits = std::string(ip) + std::string(fp);
    frac_len = static_cast<long>(fp.size());
  } else {
    if (!all_digits(s)) throw InputError("malformed number: " + std::string(text));
    digits = std::string(s);
  }
  mpz_class mantissa(digits, 10);
  long shift = exponent - frac_len;
  Rational q;
  if (shift >= 0) {
    q = Rational(mantissa * pow10(static_cast<unsigned long>(shift)));
  } else {
    q = Rational(mantissa, pow10(static_cast<unsigned long>(-shift)));
    q.canonicalize();
  }
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw InputError("empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    std::string_view num_digits = num;
    if (!num_digits.empty() && (num_digits.front() == '-' || num_digits.front() == '+'))
      num_digits.remove_prefix(1);
    if (!all_digits(num_digits) || !all_digits(den))
      throw InputError("malformed fraction: " + std::string(text));
    mpz_class d(std::string(den), 10);
    if (d == 0) throw InputError("zero denominator: " + std::string(text));
    mpz_class n(std::string(num_digits), 10);
    if (!num.empty() && num.front() == '-') n = -n;
    Rational q(n, d);
    q.canonicalize();
    return q;
  }
  return parse_decimal(text);
}

std::string to_string(const Rational& q) {
  mpz_class den = q.get_den();
  unsigned long twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return q.get_str(10);

  unsigned long places = std::max(twos, fives);
  mpz_class scaled = q.get_num() * pow10(places) / q.get_den();
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.get_str(10);
  if (places > 0) {
    if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
    digits.insert(digits.size() - places, ".");
  }
  return negative ? "-" + digits : digits;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw InputError("non-finite value cannot be made rational");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw InputError("number formatting failed");
  return parse_rational(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

Rational exp_neg_factor(double delta) {
  if (delta < 0 || !std::isfinite(delta)) throw InputError("delta must be finite and >= 0");
  if (delta == 0) return Rational(1);
  return Rational(std::exp(-delta));
}

Rational sum(std::span<const Rational> values) {
  Rational s(0);
  for (const auto& v : values) s += v;
  return s;
}

double to_double(const Rational& q) {
  // mpq_get_d truncates; step one ulp away from zero when that is closer.
  const double t = q.get_d();
  if (!std::isfinite(t)) return t;
  const double away = std::nextafter(t, q >= 0 ? HUGE_VAL : -HUGE_VAL);
  if (!std::isfinite(away)) return t;
  const Rational gap_t = abs(q - Rational(t));
  const Rational gap_away = abs(q - Rational(away));
  if (gap_away < gap_t) return away;
  if (gap_away == gap_t && (std::bit_cast<std::uint64_t>(away) & 1) == 0) return away;
  return t;
}

std::vector<double> to_doubles(std::span<const Rational> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(to_double(v));
  return out;
}

}  // namespace rholap
