#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ripple/matrix.hpp"
#include "ripple/tokenizer.hpp"

namespace ripple {

/// Frontier attention mask over a contiguous range of emitted faces. Row i may
/// attend to column j iff face j is in the frontier queue of face i, or j == i.
class FrontierMask {
 public:
  FrontierMask() = default;
  FrontierMask(std::uint32_t first_face, std::uint32_t size);

  std::uint32_t first_face() const noexcept { return first_; }
  std::uint32_t size() const noexcept { return size_; }

  bool attends(std::uint32_t row, std::uint32_t col) const { return allowed_[static_cast<std::size_t>(row) * size_ + col] != 0; }
  /// Additive logit: 0 or -infinity.
  double logit(std::uint32_t row, std::uint32_t col) const;
  Matrix logits() const;
  /// Dense export, 0 for attendable and -1 for masked.
  std::vector<std::int8_t> dense_i8() const;
  /// Window-relative columns a row attends to, ascending.
  std::vector<std::uint32_t> row_support(std::uint32_t row) const;

  /// Frontier members that fell before the window start, summed over rows.
  std::uint64_t clipped() const noexcept { return clipped_; }

 private:
  friend FrontierMask frontier_mask(std::span<const FrontierSnapshot>, std::uint32_t, std::uint32_t);

  std::uint32_t first_ = 0;
  std::uint32_t size_ = 0;
  std::vector<std::uint8_t> allowed_;
  std::uint64_t clipped_ = 0;
};

std::vector<FrontierSnapshot> frontier_snapshots(const TokenSequence& seq);

/// Mask for faces [first, first + count).
FrontierMask frontier_mask(std::span<const FrontierSnapshot> snapshots, std::uint32_t first, std::uint32_t count);

struct NscaParams {
  std::uint32_t block_size = 64;
  std::uint32_t top_k = 16;
  std::uint32_t local_kernel = 32;
  std::uint32_t local_stride = 16;
};

/// Block partition of the full face sequence plus per-step block validity.
/// A block is valid at step t when none of its positions lies after t.
class NscaLayout {
 public:
  NscaLayout() = default;
  NscaLayout(std::uint32_t seq_len, NscaParams params);

  const NscaParams& params() const noexcept { return params_; }
  std::uint32_t seq_len() const noexcept { return seq_len_; }
  std::uint32_t block_count() const noexcept { return static_cast<std::uint32_t>(blocks_.size()); }
  /// Half-open position range of a block.
  std::pair<std::uint32_t, std::uint32_t> block(std::uint32_t b) const { return blocks_[b]; }

  /// Valid blocks at step t form the prefix [0, valid_block_count(t)).
  std::uint32_t valid_block_count(std::uint32_t step) const;
  bool block_valid(std::uint32_t b, std::uint32_t step) const { return b < valid_block_count(step); }
  /// Local window positions [begin, end) for step t; strictly before t.
  std::pair<std::uint32_t, std::uint32_t> local_window(std::uint32_t step) const;

 private:
  NscaParams params_;
  std::uint32_t seq_len_ = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> blocks_;
};

NscaLayout nsca_plan(std::uint32_t seq_len_faces, const NscaParams& params = {});

/// Row-wise softmax(Q K^T / sqrt(d) + mask) V. Rows with no finite logit are zero.
Matrix reference_attention(const Matrix& queries, const Matrix& keys, const Matrix& values, const Matrix& mask);

/// Mean-pooled key (or value) per block.
Matrix compress_blocks(const Matrix& x, const NscaLayout& layout);

/// Top-k valid blocks by q . compressed_key, ties to the lower block id.
std::vector<std::uint32_t> select_blocks(std::span<const double> query, const Matrix& compressed_keys,
                                         const NscaLayout& layout, std::uint32_t step);

struct NscaGate {
  double compressed = 1.0 / 3.0;
  double selected = 1.0 / 3.0;
  double local = 1.0 / 3.0;
};

struct NscaOutput {
  Matrix output;
  std::vector<std::vector<std::uint32_t>> selected;
};

/// Deterministic stand-in for the learned sparse contextual attention. Row r
/// of `queries` is the query for face position `steps[r]`; keys and values
/// cover the full sequence.
NscaOutput nsca_reference(const Matrix& keys, const Matrix& values, const Matrix& queries,
                          std::span<const std::uint32_t> steps, const NscaLayout& layout, const NscaGate& gate);

/// Per-face embeddings pooled from coordinate tokens: fixed pseudo-random
/// coordinate table, concatenation of the nine coordinates, fixed projection.
Matrix face_embeddings(const TokenSequence& seq, std::size_t dim, std::uint64_t seed);

/// "RIPM" mask sidecar for one window, little-endian:
///   u32 magic 0x5249504D, u16 version (1), u32 window, u32 first face, u32 faces n, u64 clipped,
///   i8 dense[n*n], then per row: u32 count + u32 columns,
///   u32 block_size, u32 top_k, u32 local_kernel, u32 local_stride, u32 seq_len, u32 block count,
///   then per row: u32 valid block count, u32 selected count, u32 selected ids.
inline constexpr std::uint32_t kMaskMagic = 0x5249504D;

std::vector<std::uint8_t> encode_mask_window(std::uint32_t window_index, const FrontierMask& mask,
                                             const NscaLayout& layout,
                                             const std::vector<std::vector<std::uint32_t>>& selected);

struct MaskWindowFile {
  std::uint32_t window_index = 0;
  std::uint32_t first_face = 0;
  std::uint32_t faces = 0;
  std::uint64_t clipped = 0;
  std::vector<std::int8_t> dense;
  std::vector<std::vector<std::uint32_t>> row_support;
  NscaParams params;
  std::uint32_t seq_len = 0;
  std::uint32_t block_count = 0;
  std::vector<std::uint32_t> valid_blocks;
  std::vector<std::vector<std::uint32_t>> selected;
};

MaskWindowFile decode_mask_window(std::span<const std::uint8_t> bytes);

}  // namespace ripple
