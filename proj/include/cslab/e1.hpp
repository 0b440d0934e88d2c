#pragma once

#include "cslab/cs_space.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cslab {

/// R x C window of a point of 2^(N x N).
class BinaryGrid {
 public:
  BinaryGrid(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool at(std::size_t r, std::size_t c) const { return bits_.at(r * cols_ + c) != 0; }
  void set(std::size_t r, std::size_t c, bool value) { bits_.at(r * cols_ + c) = value ? 1 : 0; }
  bool row_equal(std::size_t r, const BinaryGrid& other, std::size_t other_r) const;

  /// Rows nonempty, pairwise disjoint, covering every column, with strictly
  /// increasing row minima.
  bool is_cs() const;

  /// ".grid" text: "R C" header, then R lines of C binary digits.
  std::string to_text() const;
  static BinaryGrid parse(std::string_view text);

  friend bool operator==(const BinaryGrid&, const BinaryGrid&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint8_t> bits_;
};

/// The sets N_{-1}, N_0, N_1, ... restricted to {0, ..., L-1}, with their
/// increasing enumerations t_{-1}, t_0, t_1, ...
struct AllocationScheme {
  static constexpr std::int64_t kSpine = -1;  // N_{-1}

  std::size_t horizon = 0;
  std::vector<std::int64_t> owner;     // per point: -1 or n for N_n
  std::vector<std::size_t> position;   // per point: index under its t_k
  std::vector<std::size_t> spine;      // t_{-1}(0), t_{-1}(1), ...
  std::vector<std::vector<std::size_t>> columns;  // columns[n] = t_n(0), t_n(1), ...
};

/// Round r: the two least free integers go to N_{-1}, the next opens N_r,
/// then N_0, ..., N_r take one more each. Truncated at L.
AllocationScheme round_robin_alloc(std::size_t horizon);

/// Row n is the indicator of the n-th block of A (blocks in order of minima).
BinaryGrid cs_encode(const PartitionPrefix& a);
/// Inverse of cs_encode; DomainError unless the grid satisfies the CS conditions.
PartitionPrefix cs_decode(const BinaryGrid& x);

enum class E1Mode { Fixed, Tail };

struct E1Shift {
  std::size_t n_x = 0;
  std::size_t n_y = 0;
  friend bool operator==(const E1Shift&, const E1Shift&) = default;
};

/// Window form of E_1 and E_1-tail.
/// Fixed: least n0 such that rows n0..R-1 agree (n_x = n_y = n0); absent when
/// the last row differs. Tail: least (n_x, n_y), ordered by n_x + n_y and then
/// n_x, with x row n_x + n equal to y row n_y + n wherever both rows lie in the
/// window, at least one row compared. Dimensions must match (DomainError).
std::optional<E1Shift> e1_window_equiv(const BinaryGrid& x, const BinaryGrid& y, E1Mode mode);

/// f(x) on {0, ..., L-1}: a point t_{-1}(j) lies in A_j; a point t_n(i) lies
/// in A_{2n} when x(n, i) = 1 and in A_{2n+1} otherwise. Throws
/// InsufficientTruncation when some t_n(i) < L falls outside the grid.
PartitionPrefix reduce_f(const BinaryGrid& x, std::size_t horizon);

/// Largest L for which reduce_f can decide every point of an R x C grid.
std::size_t reduce_f_horizon(std::size_t rows, std::size_t cols);

/// The coarsening of D whose n-th block is the union of D_k over k in A_n.
/// Output window: mu_{|A|}(D) when |A| < blocks(D), else all of D. A longer
/// than blocks(D) is cut to blocks(D). Throws InsufficientTruncation when A
/// shows more blocks than D.
PartitionPrefix blowup_iso(const PartitionPrefix& a, const PartitionPrefix& d);

/// Reads A back off the blocks of D: k A j iff D_k and D_j share a block of B.
/// DomainError unless B <= D on the window.
PartitionPrefix blowup_inverse(const PartitionPrefix& b, const PartitionPrefix& d);

}  // namespace cslab
