#pragma once

// Height functions restricted to a finite window, their occupation and N_x
// views, and ordered particle configurations.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dasep {

using Site = std::int64_t;
using Height = std::int64_t;

/// Heights s_{x_left}, ..., s_{x_right} with unit increments, in the sector s_x = x (mod 2).
class HeightWindow {
 public:
  HeightWindow(Site x_left, std::vector<Height> heights);

  Site x_left() const { return x_left_; }
  Site x_right() const { return x_left_ + static_cast<Site>(heights_.size()) - 1; }
  std::size_t size() const { return heights_.size(); }
  bool contains(Site x) const { return x >= x_left() && x <= x_right(); }
  bool is_interior(Site x) const { return x > x_left() && x < x_right(); }

  /// Height at site x; throws std::out_of_range outside the window.
  Height at(Site x) const;
  Height operator[](Site x) const { return heights_[static_cast<std::size_t>(x - x_left_)]; }
  std::span<const Height> heights() const { return heights_; }

  /// N_x = (s_x - x) / 2.
  std::int64_t N(Site x) const { return (at(x) - x) / 2; }

  bool is_local_max(Site x) const;
  bool is_local_min(Site x) const;

  /// Applies s_x -> s_x + delta (delta = +-2) at an interior local extremum;
  /// throws std::invalid_argument when the flip would leave the state space.
  void flip(Site x, int delta);
  HeightWindow flipped(Site x, int delta) const;

  friend bool operator==(const HeightWindow&, const HeightWindow&) = default;

 private:
  Site x_left_;
  std::vector<Height> heights_;
};

/// Strictly decreasing particle positions x_1 > x_2 > ... > x_n, n >= 1.
class ParticleConfig {
 public:
  explicit ParticleConfig(std::vector<Site> positions);

  std::size_t size() const { return positions_.size(); }
  /// Position of particle with 1-based label k.
  Site label(std::size_t k) const { return positions_[k - 1]; }
  Site operator[](std::size_t index) const { return positions_[index]; }
  std::span<const Site> positions() const { return positions_; }

  /// Copy with particle `index` (0-based) displaced by delta; throws if ordering breaks.
  ParticleConfig moved(std::size_t index, Site delta) const;
  ParticleConfig shifted(Site delta) const;

  friend bool operator==(const ParticleConfig&, const ParticleConfig&) = default;

 private:
  std::vector<Site> positions_;
};

/// eta_{x+1/2} = (1 + s_x - s_{x+1}) / 2 for x = x_left .. x_right - 1.
std::vector<int> to_occupation(const HeightWindow& w);

/// N_x = (s_x - x) / 2 at every site of the window.
std::vector<std::int64_t> to_N(const HeightWindow& w);

/// Inverse of to_occupation given the left anchor.
HeightWindow from_occupation(Site x_left, Height s_left, std::span<const int> eta);

/// Number of windows of the given length with a fixed anchor: 2^{len-1}.
std::uint64_t window_count(std::size_t len);

/// The index-th window of length len anchored at (x_left, s_left); bit j of the
/// index is the occupation eta_{x_left + j + 1/2}.
HeightWindow window_at(Site x_left, Height s_left, std::size_t len, std::uint64_t index);

/// All 2^{len-1} windows anchored at (x_left, s_left), in index order.
std::vector<HeightWindow> enumerate_windows(Site x_left, Height s_left, std::size_t len);

/// Text form "x_left s_{x_left} ... s_{x_right}".
std::string format_window(const HeightWindow& w);
HeightWindow parse_window(std::string_view text);

std::ostream& operator<<(std::ostream& os, const HeightWindow& w);
std::ostream& operator<<(std::ostream& os, const ParticleConfig& x);

}  // namespace dasep
