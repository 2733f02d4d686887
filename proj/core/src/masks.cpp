#include "ripple/masks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "ripple/binary_io.hpp"
#include "ripple/error.hpp"

namespace ripple {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Softmax-weighted sum of `values` rows `cols` with the given logits; zero when
// `cols` is empty.
void attend(std::span<const double> logits, std::span<const std::uint32_t> cols, const Matrix& values,
            std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  double peak = kNegInf;
  for (double l : logits) peak = std::max(peak, l);
  if (peak == kNegInf) return;
  double total = 0.0;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (logits[j] == kNegInf) continue;
    const double w = std::exp(logits[j] - peak);
    total += w;
    const auto v = values.row(cols[j]);
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += w * v[c];
  }
  for (double& x : out) x /= total;
}

}  // namespace

FrontierMask::FrontierMask(std::uint32_t first_face, std::uint32_t size)
    : first_(first_face), size_(size), allowed_(static_cast<std::size_t>(size) * size, 0) {}

double FrontierMask::logit(std::uint32_t row, std::uint32_t col) const {
  return attends(row, col) ? 0.0 : kNegInf;
}

Matrix FrontierMask::logits() const {
  Matrix m(size_, size_, kNegInf);
  for (std::uint32_t i = 0; i < size_; ++i) {
    for (std::uint32_t j = 0; j < size_; ++j) {
      if (attends(i, j)) m(i, j) = 0.0;
    }
  }
  return m;
}

std::vector<std::int8_t> FrontierMask::dense_i8() const {
  std::vector<std::int8_t> out(allowed_.size());
  for (std::size_t k = 0; k < allowed_.size(); ++k) out[k] = allowed_[k] ? 0 : -1;
  return out;
}

std::vector<std::uint32_t> FrontierMask::row_support(std::uint32_t row) const {
  std::vector<std::uint32_t> cols;
  for (std::uint32_t j = 0; j <= row; ++j) {
    if (attends(row, j)) cols.push_back(j);
  }
  return cols;
}

std::vector<FrontierSnapshot> frontier_snapshots(const TokenSequence& seq) {
  std::vector<FrontierSnapshot> out(seq.face_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = seq.frontier(i);
  return out;
}

FrontierMask frontier_mask(std::span<const FrontierSnapshot> snapshots, std::uint32_t first, std::uint32_t count) {
  if (static_cast<std::size_t>(first) + count > snapshots.size()) {
    throw Error(ErrorCode::InvalidArgument, "mask window exceeds the sequence");
  }
  FrontierMask mask(first, count);
  for (std::uint32_t r = 0; r < count; ++r) {
    const std::uint32_t i = first + r;
    const auto& b = snapshots[i];
    const std::uint32_t lo = std::max(b.head, first);
    if (b.head < first) mask.clipped_ += std::min(b.end, first) - b.head;
    auto* row = mask.allowed_.data() + static_cast<std::size_t>(r) * count;
    for (std::uint32_t j = lo; j < b.end && j <= i; ++j) row[j - first] = 1;
    row[r] = 1;
  }
  return mask;
}

NscaLayout::NscaLayout(std::uint32_t seq_len, NscaParams params) : params_(params), seq_len_(seq_len) {
  for (std::uint32_t begin = 0; begin < seq_len; begin += params.block_size) {
    blocks_.emplace_back(begin, std::min(seq_len, begin + params.block_size));
  }
}

std::uint32_t NscaLayout::valid_block_count(std::uint32_t step) const {
  if (static_cast<std::uint64_t>(step) + 1 >= seq_len_) return block_count();
  return std::min(block_count(), (step + 1) / params_.block_size);
}

std::pair<std::uint32_t, std::uint32_t> NscaLayout::local_window(std::uint32_t step) const {
  const std::uint32_t end = std::min(step, seq_len_);
  const std::uint32_t begin = end > params_.local_kernel ? end - params_.local_kernel : 0;
  return {begin, end};
}

NscaLayout nsca_plan(std::uint32_t seq_len_faces, const NscaParams& params) {
  if (seq_len_faces == 0) throw Error(ErrorCode::InvalidArgument, "sequence length must be positive");
  if (params.block_size == 0 || params.local_kernel == 0 || params.local_stride == 0) {
    throw Error(ErrorCode::InvalidArgument, "block size, local kernel and local stride must be positive");
  }
  return NscaLayout(seq_len_faces, params);
}

Matrix reference_attention(const Matrix& queries, const Matrix& keys, const Matrix& values, const Matrix& mask) {
  if (queries.cols() != keys.cols() || keys.rows() != values.rows() || mask.rows() != queries.rows() ||
      mask.cols() != keys.rows()) {
    throw Error(ErrorCode::ShapeError, "Q " + std::to_string(queries.rows()) + "x" + std::to_string(queries.cols()) +
                                           ", K " + std::to_string(keys.rows()) + "x" + std::to_string(keys.cols()) +
                                           ", V " + std::to_string(values.rows()) + "x" +
                                           std::to_string(values.cols()) + ", mask " + std::to_string(mask.rows()) +
                                           "x" + std::to_string(mask.cols()));
  }
  const double scale = queries.cols() ? 1.0 / std::sqrt(static_cast<double>(queries.cols())) : 0.0;
  Matrix out(queries.rows(), values.cols());
  std::vector<double> logits(keys.rows());
  std::vector<std::uint32_t> cols(keys.rows());
  std::iota(cols.begin(), cols.end(), 0u);
  for (std::size_t i = 0; i < queries.rows(); ++i) {
    for (std::size_t j = 0; j < keys.rows(); ++j) {
      const double m = mask(i, j);
      logits[j] = m == kNegInf ? kNegInf : dot(queries.row(i), keys.row(j)) * scale + m;
    }
    attend(logits, cols, values, out.row(i));
  }
  return out;
}

Matrix compress_blocks(const Matrix& x, const NscaLayout& layout) {
  if (x.rows() < layout.seq_len()) throw Error(ErrorCode::ShapeError, "fewer rows than the planned sequence");
  Matrix out(layout.block_count(), x.cols());
  for (std::uint32_t b = 0; b < layout.block_count(); ++b) {
    const auto [begin, end] = layout.block(b);
    auto dst = out.row(b);
    for (std::uint32_t p = begin; p < end; ++p) {
      const auto src = x.row(p);
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
    }
    for (double& v : dst) v /= static_cast<double>(end - begin);
  }
  return out;
}

std::vector<std::uint32_t> select_blocks(std::span<const double> query, const Matrix& compressed_keys,
                                         const NscaLayout& layout, std::uint32_t step) {
  const std::uint32_t valid = layout.valid_block_count(step);
  std::vector<std::pair<double, std::uint32_t>> scored;
  scored.reserve(valid);
  for (std::uint32_t b = 0; b < valid; ++b) scored.emplace_back(dot(query, compressed_keys.row(b)), b);
  const std::size_t k = std::min<std::size_t>(layout.params().top_k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(),
                    [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
  std::vector<std::uint32_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(scored[i].second);
  std::sort(out.begin(), out.end());
  return out;
}

NscaOutput nsca_reference(const Matrix& keys, const Matrix& values, const Matrix& queries,
                          std::span<const std::uint32_t> steps, const NscaLayout& layout, const NscaGate& gate) {
  if (keys.rows() != values.rows() || keys.rows() < layout.seq_len() || queries.cols() != keys.cols() ||
      queries.rows() != steps.size()) {
    throw Error(ErrorCode::ShapeError, "inconsistent NSCA inputs");
  }
  const double gate_sum = gate.compressed + gate.selected + gate.local;
  if (gate.compressed < 0 || gate.selected < 0 || gate.local < 0 || std::abs(gate_sum - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "gate weights must be non-negative and sum to 1");
  }

  const Matrix ck = compress_blocks(keys, layout);
  const Matrix cv = compress_blocks(values, layout);
  const double scale = 1.0 / std::sqrt(static_cast<double>(keys.cols()));

  NscaOutput res{Matrix(queries.rows(), values.cols()), {}};
  res.selected.resize(queries.rows());
  std::vector<double> logits;
  std::vector<std::uint32_t> cols;
  std::vector<double> branch(values.cols());

  auto accumulate = [&](std::span<double> out, double weight) {
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += weight * branch[c];
  };

  for (std::size_t r = 0; r < queries.rows(); ++r) {
    const std::uint32_t t = steps[r];
    if (t >= layout.seq_len()) throw Error(ErrorCode::InvalidArgument, "step beyond planned sequence");
    const auto q = queries.row(r);
    auto out = res.output.row(r);

    // Compressed branch: one mean-pooled token per valid block.
    const std::uint32_t valid = layout.valid_block_count(t);
    logits.clear();
    cols.clear();
    for (std::uint32_t b = 0; b < valid; ++b) {
      logits.push_back(dot(q, ck.row(b)) * scale);
      cols.push_back(b);
    }
    attend(logits, cols, cv, branch);
    accumulate(out, gate.compressed);

    // Selected branch: raw tokens of the top-k valid blocks.
    res.selected[r] = select_blocks(q, ck, layout, t);
    logits.clear();
    cols.clear();
    for (auto b : res.selected[r]) {
      const auto [begin, end] = layout.block(b);
      for (std::uint32_t p = begin; p < end; ++p) {
        logits.push_back(dot(q, keys.row(p)) * scale);
        cols.push_back(p);
      }
    }
    attend(logits, cols, values, branch);
    accumulate(out, gate.selected);

    // Local branch: trailing window strictly before t.
    const auto [lbegin, lend] = layout.local_window(t);
    logits.clear();
    cols.clear();
    for (std::uint32_t p = lbegin; p < lend; ++p) {
      logits.push_back(dot(q, keys.row(p)) * scale);
      cols.push_back(p);
    }
    attend(logits, cols, values, branch);
    accumulate(out, gate.local);
  }
  return res;
}

Matrix face_embeddings(const TokenSequence& seq, std::size_t dim, std::uint64_t seed) {
  constexpr std::size_t kCoordDim = 4;
  std::mt19937_64 rng(seed);
  // Raw engine bits only, so the tables are identical on every platform.
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1p-53 * 2.0 - 1.0; };

  Matrix table(static_cast<std::size_t>(seq.bins), kCoordDim);
  for (double& v : table.data()) v = uniform();
  Matrix proj(9 * kCoordDim, dim);
  const double norm = 1.0 / std::sqrt(static_cast<double>(9 * kCoordDim));
  for (double& v : proj.data()) v = uniform() * norm;

  Matrix out(seq.face_count(), dim);
  std::vector<double> concat(9 * kCoordDim);
  for (std::size_t f = 0; f < seq.face_count(); ++f) {
    for (std::size_t k = 0; k < 9; ++k) {
      const auto row = table.row(seq.tokens[seq.face_offset[f] + k]);
      std::copy(row.begin(), row.end(), concat.begin() + static_cast<std::ptrdiff_t>(k * kCoordDim));
    }
    auto dst = out.row(f);
    for (std::size_t i = 0; i < concat.size(); ++i) {
      const auto p = proj.row(i);
      for (std::size_t c = 0; c < dim; ++c) dst[c] += concat[i] * p[c];
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_mask_window(std::uint32_t window_index, const FrontierMask& mask,
                                             const NscaLayout& layout,
                                             const std::vector<std::vector<std::uint32_t>>& selected) {
  if (selected.size() != mask.size()) throw Error(ErrorCode::InvalidArgument, "one selection list per row required");
  ByteWriter w;
  w.put(kMaskMagic);
  w.put(static_cast<std::uint16_t>(1));
  w.put(window_index);
  w.put(mask.first_face());
  w.put(mask.size());
  w.put(mask.clipped());
  const auto dense = mask.dense_i8();
  w.put_all<std::int8_t>(dense);
  for (std::uint32_t r = 0; r < mask.size(); ++r) {
    const auto cols = mask.row_support(r);
    w.put(static_cast<std::uint32_t>(cols.size()));
    w.put_all<std::uint32_t>(cols);
  }
  const auto& p = layout.params();
  w.put(p.block_size);
  w.put(p.top_k);
  w.put(p.local_kernel);
  w.put(p.local_stride);
  w.put(layout.seq_len());
  w.put(layout.block_count());
  for (std::uint32_t r = 0; r < mask.size(); ++r) {
    w.put(layout.valid_block_count(mask.first_face() + r));
    w.put(static_cast<std::uint32_t>(selected[r].size()));
    w.put_all<std::uint32_t>(selected[r]);
  }
  return std::move(w).take();
}

MaskWindowFile decode_mask_window(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.get<std::uint32_t>() != kMaskMagic) throw Error(ErrorCode::FormatError, "bad RIPM magic");
  if (r.get<std::uint16_t>() != 1) throw Error(ErrorCode::FormatError, "unsupported RIPM version");
  MaskWindowFile f;
  f.window_index = r.get<std::uint32_t>();
  f.first_face = r.get<std::uint32_t>();
  f.faces = r.get<std::uint32_t>();
  f.clipped = r.get<std::uint64_t>();
  f.dense = r.get_all<std::int8_t>(static_cast<std::size_t>(f.faces) * f.faces);
  for (std::uint32_t i = 0; i < f.faces; ++i) f.row_support.push_back(r.get_all<std::uint32_t>(r.get<std::uint32_t>()));
  f.params.block_size = r.get<std::uint32_t>();
  f.params.top_k = r.get<std::uint32_t>();
  f.params.local_kernel = r.get<std::uint32_t>();
  f.params.local_stride = r.get<std::uint32_t>();
  f.seq_len = r.get<std::uint32_t>();
  f.block_count = r.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < f.faces; ++i) {
    f.valid_blocks.push_back(r.get<std::uint32_t>());
    f.selected.push_back(r.get_all<std::uint32_t>(r.get<std::uint32_t>()));
  }
  if (!r.done()) throw Error(ErrorCode::FormatError, "trailing bytes after RIPM payload");
  return f;
}

}  // namespace ripple
