#include "dasep/lattice.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dasep {

namespace {

bool same_parity(Height s, Site x) { return ((s - x) % 2) == 0; }

}  // namespace

HeightWindow::HeightWindow(Site x_left, std::vector<Height> heights)
    : x_left_(x_left), heights_(std::move(heights)) {
  if (heights_.empty()) throw std::invalid_argument("HeightWindow: empty window");
  if (!same_parity(heights_.front(), x_left_))
    throw std::invalid_argument("HeightWindow: s_x - x must be even");
  for (std::size_t i = 1; i < heights_.size(); ++i) {
    const Height d = heights_[i] - heights_[i - 1];
    if (d != 1 && d != -1) throw std::invalid_argument("HeightWindow: increments must be +-1");
  }
}

Height HeightWindow::at(Site x) const {
  if (!contains(x)) throw std::out_of_range("HeightWindow: site " + std::to_string(x) + " outside window");
  return (*this)[x];
}

bool HeightWindow::is_local_max(Site x) const {
  if (!is_interior(x)) return false;
  const Height s = (*this)[x];
  return (*this)[x - 1] == s - 1 && (*this)[x + 1] == s - 1;
}

bool HeightWindow::is_local_min(Site x) const {
  if (!is_interior(x)) return false;
  const Height s = (*this)[x];
  return (*this)[x - 1] == s + 1 && (*this)[x + 1] == s + 1;
}

void HeightWindow::flip(Site x, int delta) {
  if (delta == -2 && is_local_max(x)) {
    heights_[static_cast<std::size_t>(x - x_left_)] -= 2;
  } else if (delta == 2 && is_local_min(x)) {
    heights_[static_cast<std::size_t>(x - x_left_)] += 2;
  } else {
    throw std::invalid_argument("HeightWindow::flip: no admissible flip at site " + std::to_string(x));
  }
}

HeightWindow HeightWindow::flipped(Site x, int delta) const {
  HeightWindow copy = *this;
  copy.flip(x, delta);
  return copy;
}

ParticleConfig::ParticleConfig(std::vector<Site> positions) : positions_(std::move(positions)) {
  if (positions_.empty()) throw std::invalid_argument("ParticleConfig: need at least one particle");
  for (std::size_t i = 1; i < positions_.size(); ++i)
    if (!(positions_[i - 1] > positions_[i]))
      throw std::invalid_argument("ParticleConfig: positions must be strictly decreasing");
}

ParticleConfig ParticleConfig::moved(std::size_t index, Site delta) const {
  std::vector<Site> next = positions_;
  next.at(index) += delta;
  return ParticleConfig(std::move(next));
}

ParticleConfig ParticleConfig::shifted(Site delta) const {
  std::vector<Site> next = positions_;
  for (auto& x : next) x += delta;
  return ParticleConfig(std::move(next));
}

std::vector<int> to_occupation(const HeightWindow& w) {
  std::vector<int> eta;
  eta.reserve(w.size() - 1);
  const auto s = w.heights();
  for (std::size_t i = 0; i + 1 < s.size(); ++i) eta.push_back(static_cast<int>((1 + s[i] - s[i + 1]) / 2));
  return eta;
}

std::vector<std::int64_t> to_N(const HeightWindow& w) {
  std::vector<std::int64_t> n;
  n.reserve(w.size());
  for (Site x = w.x_left(); x <= w.x_right(); ++x) n.push_back((w[x] - x) / 2);
  return n;
}

HeightWindow from_occupation(Site x_left, Height s_left, std::span<const int> eta) {
  if (!same_parity(s_left, x_left)) throw std::invalid_argument("from_occupation: s_left - x_left must be even");
  std::vector<Height> heights;
  heights.reserve(eta.size() + 1);
  heights.push_back(s_left);
  for (int e : eta) {
    if (e != 0 && e != 1) throw std::invalid_argument("from_occupation: occupations must be 0 or 1");
    heights.push_back(heights.back() + 1 - 2 * e);
  }
  return HeightWindow(x_left, std::move(heights));
}

std::uint64_t window_count(std::size_t len) {
  if (len == 0 || len > 64) throw std::invalid_argument("window_count: length must be in [1, 64]");
  return std::uint64_t{1} << (len - 1);
}

HeightWindow window_at(Site x_left, Height s_left, std::size_t len, std::uint64_t index) {
  if (index >= window_count(len)) throw std::out_of_range("window_at: index out of range");
  std::vector<int> eta(len - 1);
  for (std::size_t j = 0; j + 1 < len; ++j) eta[j] = static_cast<int>((index >> j) & 1U);
  return from_occupation(x_left, s_left, eta);
}

std::vector<HeightWindow> enumerate_windows(Site x_left, Height s_left, std::size_t len) {
  const auto count = window_count(len);
  std::vector<HeightWindow> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(window_at(x_left, s_left, len, i));
  return out;
}

std::string format_window(const HeightWindow& w) {
  std::ostringstream os;
  os << w;
  return os.str();
}

HeightWindow parse_window(std::string_view text) {
  std::istringstream is{std::string(text)};
  Site x_left{};
  if (!(is >> x_left)) throw std::invalid_argument("parse_window: missing x_left");
  std::vector<Height> heights;
  Height h{};
  while (is >> h) heights.push_back(h);
  if (!is.eof()) throw std::invalid_argument("parse_window: non-integer token");
  return HeightWindow(x_left, std::move(heights));
}

std::ostream& operator<<(std::ostream& os, const HeightWindow& w) {
  os << w.x_left();
  for (Height h : w.heights()) os << ' ' << h;
  return os;
}

std::ostream& operator<<(std::ostream& os, const ParticleConfig& x) {
  os << '(';
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? "," : "") << x[i];
  return os << ')';
}

}  // namespace dasep
