#include "dmmf/format.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <stdexcept>

namespace dmmf {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

} // namespace

std::string format_real(double x, int significant) {
  std::array<char, 64> buf{};
  if (x == 0) x = 0;  // no "-0"
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, significant);
  if (ec != std::errc{}) throw std::runtime_error("format_real failed");
  return std::string(buf.data(), ptr);
}

std::string format_exact(double x) {
  std::array<char, 64> buf{};
  if (x == 0) x = 0;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) throw std::runtime_error("format_exact failed");
  return std::string(buf.data(), ptr);
}

double parse_real(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("expected a number, got '" + std::string(text) + "'");
  return v;
}

std::int64_t parse_integer(std::string_view text) {
  text = trim(text);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
    throw std::invalid_argument("expected an integer, got '" + std::string(text) + "'");
  return v;
}

} // namespace dmmf
