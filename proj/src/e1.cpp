#include "cslab/e1.hpp"

#include "cslab/error.hpp"

#include <algorithm>
#include <sstream>

namespace cslab {

BinaryGrid::BinaryGrid(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), bits_(rows * cols, 0) {
  if (rows == 0 || cols == 0) throw DomainError("grid dimensions must be positive");
}

bool BinaryGrid::row_equal(std::size_t r, const BinaryGrid& other, std::size_t other_r) const {
  return std::equal(bits_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                    bits_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_),
                    other.bits_.begin() + static_cast<std::ptrdiff_t>(other_r * other.cols_));
}

bool BinaryGrid::is_cs() const {
  std::size_t previous_min = 0;
  for (std::size_t c = 0; c < cols_; ++c) {
    std::size_t ones = 0;
    for (std::size_t r = 0; r < rows_; ++r) ones += at(r, c) ? 1 : 0;
    if (ones != 1) return false;
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    std::size_t c = 0;
    while (c < cols_ && !at(r, c)) ++c;
    if (c == cols_) return false;
    if (r > 0 && c <= previous_min) return false;
    previous_min = c;
  }
  return true;
}

std::string BinaryGrid::to_text() const {
  std::string out = std::to_string(rows_) + " " + std::to_string(cols_) + "\n";
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out.push_back(at(r, c) ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

BinaryGrid BinaryGrid::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::size_t rows = 0;
  std::size_t cols = 0;
  if (!(in >> rows >> cols)) throw DomainError("grid: missing 'R C' header");
  BinaryGrid grid(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    std::string line;
    if (!(in >> line)) throw DomainError("grid: expected " + std::to_string(rows) + " rows");
    if (line.size() != cols) throw DomainError("grid: row " + std::to_string(r) + " is not " + std::to_string(cols) + " wide");
    for (std::size_t c = 0; c < cols; ++c) {
      if (line[c] != '0' && line[c] != '1') throw DomainError("grid: non-binary digit in row " + std::to_string(r));
      grid.set(r, c, line[c] == '1');
    }
  }
  std::string extra;
  if (in >> extra) throw DomainError("grid: trailing data after the last row");
  return grid;
}

AllocationScheme round_robin_alloc(std::size_t horizon) {
  if (horizon == 0) throw DomainError("round_robin_alloc: L must be positive");
  AllocationScheme s;
  s.horizon = horizon;
  s.owner.resize(horizon);
  s.position.resize(horizon);
  std::size_t next = 0;
  auto give = [&](std::int64_t owner) {
    if (next >= horizon) return false;
    s.owner[next] = owner;
    if (owner == AllocationScheme::kSpine) {
      s.position[next] = s.spine.size();
      s.spine.push_back(next);
    } else {
      auto& col = s.columns[static_cast<std::size_t>(owner)];
      s.position[next] = col.size();
      col.push_back(next);
    }
    ++next;
    return true;
  };
  for (std::size_t round = 0;; ++round) {
    if (!give(AllocationScheme::kSpine) || !give(AllocationScheme::kSpine)) break;
    s.columns.emplace_back();
    if (!give(static_cast<std::int64_t>(round))) break;
    for (std::size_t n = 0; n <= round; ++n) {
      if (!give(static_cast<std::int64_t>(n))) return s;
    }
  }
  return s;
}

BinaryGrid cs_encode(const PartitionPrefix& a) {
  if (a.length() == 0) throw DomainError("cs_encode: empty prefix");
  BinaryGrid x(a.visible_blocks(), a.length());
  for (std::size_t p = 0; p < a.length(); ++p) x.set(a.relation().block_of(p), p, true);
  return x;
}

PartitionPrefix cs_decode(const BinaryGrid& x) {
  if (!x.is_cs()) throw DomainError("cs_decode: grid violates the CS conditions");
  std::vector<SetPartition::Label> rgs(x.cols());
  for (std::size_t c = 0; c < x.cols(); ++c) {
    for (std::size_t r = 0; r < x.rows(); ++r) {
      if (x.at(r, c)) rgs[c] = static_cast<SetPartition::Label>(r);
    }
  }
  return PartitionPrefix(SetPartition::from_rgs(std::move(rgs)));
}

std::optional<E1Shift> e1_window_equiv(const BinaryGrid& x, const BinaryGrid& y, E1Mode mode) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw DomainError("e1_window_equiv: grid dimensions differ");
  const std::size_t rows = x.rows();
  if (mode == E1Mode::Fixed) {
    std::size_t n0 = rows;
    while (n0 > 0 && x.row_equal(n0 - 1, y, n0 - 1)) --n0;
    if (n0 == rows) return std::nullopt;
    return E1Shift{n0, n0};
  }
  for (std::size_t sum = 0; sum <= 2 * (rows - 1); ++sum) {
    for (std::size_t n_x = sum >= rows ? sum - rows + 1 : 0; n_x <= std::min(sum, rows - 1); ++n_x) {
      const std::size_t n_y = sum - n_x;
      bool agree = true;
      for (std::size_t n = 0; n_x + n < rows && n_y + n < rows && agree; ++n) {
        agree = x.row_equal(n_x + n, y, n_y + n);
      }
      if (agree) return E1Shift{n_x, n_y};
    }
  }
  return std::nullopt;
}

PartitionPrefix reduce_f(const BinaryGrid& x, std::size_t horizon) {
  const auto scheme = round_robin_alloc(horizon);
  std::vector<SetPartition::Label> labels(horizon);
  for (std::size_t p = 0; p < horizon; ++p) {
    const auto owner = scheme.owner[p];
    const auto pos = scheme.position[p];
    if (owner == AllocationScheme::kSpine) {
      labels[p] = static_cast<SetPartition::Label>(pos);
      continue;
    }
    const auto row = static_cast<std::size_t>(owner);
    if (row >= x.rows() || pos >= x.cols()) {
      throw InsufficientTruncation("reduce_f: point " + std::to_string(p) + " = t_" + std::to_string(row) + "(" +
                                   std::to_string(pos) + ") lies outside the " + std::to_string(x.rows()) + "x" +
                                   std::to_string(x.cols()) + " grid");
    }
    labels[p] = static_cast<SetPartition::Label>(2 * row + (x.at(row, pos) ? 0 : 1));
  }
  // t_{-1}(j) precedes every other point of A_j, so the labels are already an rgs.
  return PartitionPrefix(SetPartition::from_rgs(std::move(labels)));
}

std::size_t reduce_f_horizon(std::size_t rows, std::size_t cols) {
  std::size_t horizon = 0;
  while (true) {
    const auto scheme = round_robin_alloc(horizon + 1);
    const auto owner = scheme.owner[horizon];
    if (owner != AllocationScheme::kSpine &&
        (static_cast<std::size_t>(owner) >= rows || scheme.position[horizon] >= cols)) {
      return horizon;
    }
    ++horizon;
  }
}

PartitionPrefix blowup_iso(const PartitionPrefix& a, const PartitionPrefix& d) {
  const std::size_t d_blocks = d.visible_blocks();
  if (a.visible_blocks() > d_blocks) {
    throw InsufficientTruncation("blowup_iso: A shows " + std::to_string(a.visible_blocks()) +
                                 " blocks but D only " + std::to_string(d_blocks));
  }
  const SetPartition a_rel = a.length() > d_blocks ? a.relation().restrict(d_blocks) : a.relation();
  const std::size_t out_len = a_rel.size() < d_blocks ? mu_sequence(d)[a_rel.size()] : d.length();
  std::vector<SetPartition::Label> labels(out_len);
  for (std::size_t p = 0; p < out_len; ++p) labels[p] = a_rel.block_of(d.relation().block_of(p));
  return PartitionPrefix(SetPartition::from_labels(labels));
}

PartitionPrefix blowup_inverse(const PartitionPrefix& b, const PartitionPrefix& d) {
  if (b.length() > d.length()) throw InsufficientTruncation("blowup_inverse: B is longer than D");
  if (!prefix_coarsens(b, d)) throw DomainError("blowup_inverse: B is not a coarsening of D");
  std::vector<SetPartition::Label> labels;
  for (auto minimum : mu_sequence(d)) {
    if (minimum >= b.length()) break;
    labels.push_back(b.relation().block_of(minimum));
  }
  return PartitionPrefix(SetPartition::from_labels(labels));
}

}  // namespace cslab
