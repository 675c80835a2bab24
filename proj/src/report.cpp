#include "dasep/report.hpp"

#include <cctype>
#include <charconv>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace dasep {

std::string report_schema_version() { return "dasep-report/1"; }

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  if (res.ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, res.ptr);
}

std::string format_rational(const Rational& value) {
  const auto num = numerator(value);
  const auto den = denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Backend parse_backend(std::string_view text) {
  if (text == "float" || text == "float64" || text == "double") return Backend::float64;
  if (text == "exact" || text == "rational" || text == "exact_rational") return Backend::exact_rational;
  throw std::invalid_argument("unknown backend '" + std::string(text) + "'");
}

std::string to_string(Backend backend) { return backend == Backend::float64 ? "float64" : "exact"; }

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto fail = [&] { return std::invalid_argument("not a rational number: '" + std::string(text) + "'"); };
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  Rational value;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    const auto num = body.substr(0, slash);
    const auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) throw fail();
    const Rational d{std::string(den)};
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    value = Rational{std::string(num)} / d;
  } else if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    const auto whole = body.substr(0, dot);
    const auto frac = body.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
        (!frac.empty() && !all_digits(frac)))
      throw fail();
    Rational scale{1};
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const std::string digits = std::string(whole) + std::string(frac);
    value = Rational{digits.empty() ? std::string("0") : digits} / scale;
  } else {
    if (!all_digits(body)) throw fail();
    value = Rational{std::string(body)};
  }
  return negative ? Rational(-value) : value;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size()) throw std::invalid_argument("CsvTable: row width mismatch");
  rows_.push_back(std::move(cells));
}

void CsvTable::write(std::ostream& os) const {
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  os << "# schema: " << report_schema_version() << '\n';
  line(columns_);
  for (const auto& row : rows_) line(row);
}

}  // namespace dasep
