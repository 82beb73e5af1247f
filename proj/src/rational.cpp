#include "dmmf/rational.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dmmf {

namespace {

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  int128 p = int128{a} * b;
  if (p > kMax) throw std::invalid_argument("rational overflow");
  return static_cast<std::int64_t>(p);
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  return v;
}

} // namespace

Ratio::Ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (num < 0 || den < 0) throw std::invalid_argument("rational must be non-negative");
  const std::int64_t g = std::gcd(num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

Ratio Ratio::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty number");

  if (auto slash = text.find('/'); slash != std::string_view::npos)
    return Ratio(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));

  std::int64_t exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    auto exp_text = text.substr(e + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    exponent = parse_int(exp_text);
    text = text.substr(0, e);
  }
  std::string digits;
  std::int64_t frac_len = 0;
  bool seen_dot = false;
  for (char c : text) {
    if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_dot) ++frac_len;
    } else {
      throw std::invalid_argument("bad number '" + std::string(text) + "'");
    }
  }
  if (digits.empty()) throw std::invalid_argument("bad number '" + std::string(text) + "'");
  while (digits.size() > 1 && digits.front() == '0') digits.erase(digits.begin());
  if (digits.size() > 18) throw std::invalid_argument("number has too many digits");

  std::int64_t num = parse_int(digits);
  std::int64_t den = 1;
  exponent -= frac_len;
  for (; exponent > 0; --exponent) num = checked_mul(num, 10);
  for (; exponent < 0; ++exponent) den = checked_mul(den, 10);
  return Ratio(num, den);
}

Ratio Ratio::from_double(double x, std::int64_t max_den) {
  if (!(x >= 0) || !std::isfinite(x)) throw std::invalid_argument("rational from negative or non-finite double");
  // Continued-fraction convergents, then the best semiconvergent.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rest = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_real = std::floor(rest);
    if (a_real > 1e18) break;
    const auto a = static_cast<std::int64_t>(a_real);
    const int128 q2 = int128{q0} + int128{a} * q1;
    if (q2 > max_den) {
      const std::int64_t k = (max_den - q0) / q1;
      const Ratio semi(p0 + k * p1, q0 + k * q1);
      const Ratio conv(p1, q1);
      return std::abs(semi.to_double() - x) < std::abs(conv.to_double() - x) ? semi : conv;
    }
    const std::int64_t p2 = p0 + a * p1;
    p0 = p1; q0 = q1;
    p1 = p2; q1 = static_cast<std::int64_t>(q2);
    const double frac = rest - a_real;
    if (frac < 1e-15 || static_cast<double>(p1) / static_cast<double>(q1) == x) break;
    rest = 1.0 / frac;
  }
  return Ratio(p1, q1);
}

std::string Ratio::str() const {
  std::int64_t den = den_;
  int twos = 0, fives = 0;
  while (den % 2 == 0) { den /= 2; ++twos; }
  while (den % 5 == 0) { den /= 5; ++fives; }
  if (den != 1 || std::max(twos, fives) > 17)
    return std::to_string(num_) + "/" + std::to_string(den_);
  // Terminating decimal.
  const int places = std::max(twos, fives);
  int128 scaled = int128{num_};
  for (int i = 0; i < places; ++i) scaled *= 10;
  scaled /= den_;
  std::string digits;
  if (scaled == 0) digits = "0";
  for (int128 v = scaled; v > 0; v /= 10) digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
  if (places == 0) return digits;
  if (static_cast<int>(digits.size()) <= places) digits.insert(0, static_cast<std::size_t>(places + 1 - static_cast<int>(digits.size())), '0');
  digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  return digits;
}

int compare_fractions(int128 a, int128 b, int128 c, int128 d) {
  int sign = 1;
  for (;;) {
    const int128 qa = a / b, qc = c / d;
    if (qa != qc) return qa < qc ? -sign : sign;
    const int128 ra = a % b, rc = c % d;
    if (ra == 0 || rc == 0) {
      if (ra == rc) return 0;
      return ra == 0 ? -sign : sign;
    }
    // ra/b - rc/d has the opposite sign of b/ra - d/rc.
    a = b;
    b = ra;
    c = d;
    d = rc;
    sign = -sign;
  }
}

} // namespace dmmf
