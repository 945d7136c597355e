#include "pfs/tile.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "pfs/errors.hpp"
#include "text_scan.hpp"

namespace pfs {

namespace {

// Length of the longest strictly increasing subsequence of a short sequence.
int longest_increasing(const int* values, int n) {
  int best[16];
  int longest = 0;
  for (int i = 0; i < n; ++i) {
    best[i] = 1;
    for (int j = 0; j < i; ++j) {
      if (values[j] < values[i]) best[i] = std::max(best[i], best[j] + 1);
    }
    longest = std::max(longest, best[i]);
  }
  return longest;
}

}  // namespace

TileDomain::TileDomain(int size) : size_(size), goal_(0) {
  if (size < 2 || size > 4) throw std::invalid_argument("tile board size must be 2..4");
  TileState g;
  g.size = size;
  for (int c = 0; c < size * size; ++c) g.cells[c] = static_cast<std::uint8_t>(c);
  g.blank = 0;
  goal_ = pack(g);
}

std::string TileDomain::id() const { return size_ == 3 ? "tile8" : size_ == 4 ? "tile15" : "tile3"; }

TileState TileDomain::unpack(StateKey key) const {
  TileState s;
  s.size = size_;
  for (int c = 0; c < size_ * size_; ++c) {
    s.cells[c] = static_cast<std::uint8_t>((key >> (4 * c)) & 0xF);
    if (s.cells[c] == 0) s.blank = c;
  }
  return s;
}

StateKey TileDomain::pack(const TileState& state) const {
  StateKey key = 0;
  for (int c = 0; c < size_ * size_; ++c) key |= static_cast<StateKey>(state.cells[c]) << (4 * c);
  return key;
}

int TileDomain::manhattan(const TileState& s) {
  int total = 0;
  for (int c = 0; c < s.cell_count(); ++c) {
    int t = s.cells[c];
    if (t == 0) continue;
    total += std::abs(c / s.size - t / s.size) + std::abs(c % s.size - t % s.size);
  }
  return total;
}

int TileDomain::linear_conflicts(const TileState& s) {
  const int n = s.size;
  int extra = 0;
  int line[4];
  for (int r = 0; r < n; ++r) {
    int k = 0;
    for (int col = 0; col < n; ++col) {
      int t = s.cells[r * n + col];
      if (t != 0 && t / n == r) line[k++] = t % n;
    }
    extra += k - longest_increasing(line, k);
  }
  for (int col = 0; col < n; ++col) {
    int k = 0;
    for (int r = 0; r < n; ++r) {
      int t = s.cells[r * n + col];
      if (t != 0 && t % n == col) line[k++] = t / n;
    }
    extra += k - longest_increasing(line, k);
  }
  return manhattan(s) + 2 * extra;
}

bool TileDomain::solvable(const TileState& s) {
  int inversions = 0;
  for (int i = 0; i < s.cell_count(); ++i) {
    for (int j = i + 1; j < s.cell_count(); ++j) {
      if (s.cells[i] > s.cells[j]) ++inversions;
    }
  }
  int blank_distance = s.blank / s.size + s.blank % s.size;
  return (inversions % 2) == (blank_distance % 2);
}

double TileDomain::heuristic(StateKey state) const {
  return static_cast<double>(linear_conflicts(unpack(state)));
}

void TileDomain::successors(StateKey state, std::vector<Transition>& out) const {
  out.clear();
  int blank = 0;
  while (((state >> (4 * blank)) & 0xF) != 0) ++blank;
  const int row = blank / size_;
  const int col = blank % size_;
  auto slide = [&](ActionIndex action, int target) {
    StateKey tile = (state >> (4 * target)) & 0xF;
    StateKey next = state & ~(StateKey{0xF} << (4 * target));
    next |= tile << (4 * blank);
    out.push_back({action, next, 1.0});
  };
  if (row > 0) slide(kUp, blank - size_);
  if (row < size_ - 1) slide(kDown, blank + size_);
  if (col > 0) slide(kLeft, blank - 1);
  if (col < size_ - 1) slide(kRight, blank + 1);
}

StateKey TileDomain::parse(std::string_view text) const {
  auto tokens = detail::tokenize(text);
  const int cells = size_ * size_;
  if (static_cast<int>(tokens.size()) != cells) {
    std::size_t line = tokens.empty() ? 1 : tokens.back().line;
    std::size_t column = tokens.empty() ? 1 : tokens.back().column;
    throw ParseError("expected " + std::to_string(cells) + " tiles, got " +
                         std::to_string(tokens.size()),
                     line, column);
  }
  TileState s;
  s.size = size_;
  std::vector<bool> seen(cells, false);
  for (int c = 0; c < cells; ++c) {
    int t = detail::to_int(tokens[c]);
    if (t < 0 || t >= cells || seen[t])
      throw ParseError("tile " + std::to_string(t) + " is out of range or repeated", tokens[c].line,
                       tokens[c].column);
    seen[t] = true;
    s.cells[c] = static_cast<std::uint8_t>(t);
    if (t == 0) s.blank = c;
  }
  if (!solvable(s))
    throw ParseError("unsolvable tile configuration (parity differs from the goal)",
                     tokens.front().line, tokens.front().column);
  return pack(s);
}

std::string TileDomain::format(StateKey state) const {
  TileState s = unpack(state);
  std::ostringstream out;
  for (int c = 0; c < s.cell_count(); ++c) {
    if (c) out << ' ';
    out << static_cast<int>(s.cells[c]);
  }
  return out.str();
}

}  // namespace pfs
