#include "mdvec/layout.hpp"

#include <array>
#include <atomic>
#include <bit>
#include <new>

namespace mdvec {

namespace detail {

namespace {
std::atomic<std::uint64_t> g_alloc_count{0};
}

void* aligned_alloc64(std::size_t bytes) {
  g_alloc_count.fetch_add(1, std::memory_order_relaxed);
  return ::operator new(bytes, std::align_val_t{64});
}

void aligned_free64(void* p) noexcept {
  ::operator delete(p, std::align_val_t{64});
}

std::uint64_t allocation_count() noexcept {
  return g_alloc_count.load(std::memory_order_relaxed);
}

}  // namespace detail

void LaneConfig::validate() const {
  if (real_lane == 0 || !std::has_single_bit(real_lane) ||
      !std::has_single_bit(int_lane) || int_lane != 2 * real_lane) {
    throw ContractViolation("LaneConfig: int_lane must be 2*real_lane, powers of two");
  }
}

std::size_t pad_count(std::size_t n, std::size_t m) {
  if (m == 0) throw ContractViolation("pad_count: lane multiple must be nonzero");
  if (!std::has_single_bit(m)) throw ContractViolation("pad_count: lane multiple must be a power of two");
  return (n + m - 1) & ~(m - 1);
}

// ---------------------------------------------------------------- reals

PaddedRealArray::PaddedRealArray(std::size_t logical_len, std::size_t lane)
    : lane_(lane) {
  cap_ = pad_count(logical_len, lane);
  if (cap_ > 0) {
    data_ = static_cast<double*>(detail::aligned_alloc64(cap_ * sizeof(double)));
    std::memset(data_, 0, cap_ * sizeof(double));
  }
  logical_ = logical_len;
  padded_ = cap_;
}

PaddedRealArray PaddedRealArray::with_capacity(std::size_t cap, std::size_t lane) {
  PaddedRealArray a(cap, lane);
  a.logical_ = 0;
  a.padded_ = 0;
  return a;
}

PaddedRealArray::~PaddedRealArray() {
  if (data_) detail::aligned_free64(data_);
}

PaddedRealArray::PaddedRealArray(const PaddedRealArray& other)
    : logical_(other.logical_), padded_(other.padded_), cap_(other.cap_), lane_(other.lane_) {
  if (cap_ > 0) {
    data_ = static_cast<double*>(detail::aligned_alloc64(cap_ * sizeof(double)));
    std::memcpy(data_, other.data_, cap_ * sizeof(double));
  }
}

PaddedRealArray& PaddedRealArray::operator=(const PaddedRealArray& other) {
  if (this == &other) return *this;
  PaddedRealArray tmp(other);
  *this = std::move(tmp);
  return *this;
}

PaddedRealArray::PaddedRealArray(PaddedRealArray&& other) noexcept
    : data_(other.data_), logical_(other.logical_), padded_(other.padded_),
      cap_(other.cap_), lane_(other.lane_) {
  other.data_ = nullptr;
  other.logical_ = other.padded_ = other.cap_ = 0;
}

PaddedRealArray& PaddedRealArray::operator=(PaddedRealArray&& other) noexcept {
  if (this == &other) return *this;
  if (data_) detail::aligned_free64(data_);
  data_ = other.data_;
  logical_ = other.logical_;
  padded_ = other.padded_;
  cap_ = other.cap_;
  lane_ = other.lane_;
  other.data_ = nullptr;
  other.logical_ = other.padded_ = other.cap_ = 0;
  return *this;
}

void PaddedRealArray::set_logical_len(std::size_t n) {
  std::size_t p = pad_count(n, lane_);
  if (p > cap_) throw CapacityError("PaddedRealArray: logical length exceeds capacity");
  logical_ = n;
  padded_ = p;
  for (std::size_t k = n; k < p; ++k) data_[k] = 0.0;
}

void PaddedRealArray::fill_tail_with_last() {
  double v = logical_ > 0 ? data_[logical_ - 1] : 0.0;
  for (std::size_t k = logical_; k < padded_; ++k) data_[k] = v;
}

// --------------------------------------------------------------- indices

PaddedIndexArray::PaddedIndexArray(std::size_t logical_len, std::size_t lane)
    : lane_(lane) {
  cap_ = pad_count(logical_len, lane);
  if (cap_ > 0) {
    data_ = static_cast<std::int32_t*>(detail::aligned_alloc64(cap_ * sizeof(std::int32_t)));
    std::memset(data_, 0, cap_ * sizeof(std::int32_t));
  }
  logical_ = logical_len;
  padded_ = cap_;
}

PaddedIndexArray PaddedIndexArray::with_capacity(std::size_t cap, std::size_t lane) {
  PaddedIndexArray a(cap, lane);
  a.logical_ = 0;
  a.padded_ = 0;
  return a;
}

PaddedIndexArray::~PaddedIndexArray() {
  if (data_) detail::aligned_free64(data_);
}

PaddedIndexArray::PaddedIndexArray(const PaddedIndexArray& other)
    : logical_(other.logical_), padded_(other.padded_), cap_(other.cap_), lane_(other.lane_) {
  if (cap_ > 0) {
    data_ = static_cast<std::int32_t*>(detail::aligned_alloc64(cap_ * sizeof(std::int32_t)));
    std::memcpy(data_, other.data_, cap_ * sizeof(std::int32_t));
  }
}

PaddedIndexArray& PaddedIndexArray::operator=(const PaddedIndexArray& other) {
  if (this == &other) return *this;
  PaddedIndexArray tmp(other);
  *this = std::move(tmp);
  return *this;
}

PaddedIndexArray::PaddedIndexArray(PaddedIndexArray&& other) noexcept
    : data_(other.data_), logical_(other.logical_), padded_(other.padded_),
      cap_(other.cap_), lane_(other.lane_) {
  other.data_ = nullptr;
  other.logical_ = other.padded_ = other.cap_ = 0;
}

PaddedIndexArray& PaddedIndexArray::operator=(PaddedIndexArray&& other) noexcept {
  if (this == &other) return *this;
  if (data_) detail::aligned_free64(data_);
  data_ = other.data_;
  logical_ = other.logical_;
  padded_ = other.padded_;
  cap_ = other.cap_;
  lane_ = other.lane_;
  other.data_ = nullptr;
  other.logical_ = other.padded_ = other.cap_ = 0;
  return *this;
}

void PaddedIndexArray::set_logical_len(std::size_t n) {
  std::size_t p = pad_count(n, lane_);
  if (p > cap_) throw CapacityError("PaddedIndexArray: logical length exceeds capacity");
  logical_ = n;
  padded_ = p;
  for (std::size_t k = n; k < p; ++k) data_[k] = 0;
}

void PaddedIndexArray::fill_tail_with_last() {
  std::int32_t v = logical_ > 0 ? data_[logical_ - 1] : 0;
  for (std::size_t k = logical_; k < padded_; ++k) data_[k] = v;
}

// ------------------------------------------------------------------ mask

Mask::Mask(std::size_t cap) : cap_(cap) {
  if (cap_ > 0) {
    data_ = static_cast<std::uint8_t*>(detail::aligned_alloc64(cap_));
    std::memset(data_, 0, cap_);
  }
}

Mask::~Mask() {
  if (data_) detail::aligned_free64(data_);
}

Mask::Mask(Mask&& other) noexcept : data_(other.data_), cap_(other.cap_) {
  other.data_ = nullptr;
  other.cap_ = 0;
}

Mask& Mask::operator=(Mask&& other) noexcept {
  if (this == &other) return *this;
  if (data_) detail::aligned_free64(data_);
  data_ = other.data_;
  cap_ = other.cap_;
  other.data_ = nullptr;
  other.cap_ = 0;
  return *this;
}

void build_mask(const PaddedRealArray& values, double threshold,
                std::size_t count, Mask& out) {
  if (count % values.lane() != 0) {
    throw ContractViolation("build_mask: count is not a lane multiple");
  }
  if (count < values.padded_len() || count > out.capacity()) {
    throw ContractViolation("build_mask: count does not cover the padded region");
  }
  const double* v = values.data();
  std::uint8_t* m = out.data();
  const std::size_t nl = values.logical_len();
  // Padded slots of values are finite, so the comparison is safe; the tail
  // is forced false below regardless of what it holds.
  const std::size_t pl = values.padded_len();
#pragma omp simd
  for (std::size_t k = 0; k < pl; ++k) m[k] = v[k] <= threshold;
  for (std::size_t k = nl; k < count; ++k) m[k] = 0;
}

namespace {

template <class Arr, class T>
std::size_t compress_one(const Arr& src, const Mask& mask, Arr& dst) {
  if (mask.capacity() < src.padded_len()) {
    throw ContractViolation("compress_select: mask shorter than source padded length");
  }
  if (dst.capacity() < src.padded_len()) {
    throw ContractViolation("compress_select: destination capacity too small");
  }
  const T* s = src.data();
  const std::uint8_t* m = mask.data();
  T* d = dst.data();
  std::size_t kept = 0;
  const std::size_t n = src.padded_len();
  // Store-then-advance pack loop, the no-PACK selection idiom.
  for (std::size_t k = 0; k < n; ++k) {
    d[kept] = s[k];
    kept += m[k] != 0;
  }
  dst.set_logical_len(kept);
  dst.fill_tail_with_last();
  return kept;
}

}  // namespace

std::size_t compress_select_into(const PaddedIndexArray& src, const Mask& mask,
                                 PaddedIndexArray& dst) {
  return compress_one<PaddedIndexArray, std::int32_t>(src, mask, dst);
}

std::size_t compress_select_into(const PaddedRealArray& src, const Mask& mask,
                                 PaddedRealArray& dst) {
  return compress_one<PaddedRealArray, double>(src, mask, dst);
}

std::pair<PaddedIndexArray, std::size_t> compress_select(
    const PaddedIndexArray& src, const Mask& mask) {
  PaddedIndexArray dst = PaddedIndexArray::with_capacity(src.padded_len(), src.lane());
  std::size_t kept = compress_select_into(src, mask, dst);
  return {std::move(dst), kept};
}

std::size_t compress_select_multi(
    std::span<const PaddedIndexArray* const> int_srcs,
    std::span<const PaddedRealArray* const> real_srcs, const Mask& mask,
    std::span<PaddedIndexArray* const> int_dsts,
    std::span<PaddedRealArray* const> real_dsts) {
  if (int_srcs.size() != int_dsts.size() || real_srcs.size() != real_dsts.size()) {
    throw ContractViolation("compress_select_multi: source/destination count mismatch");
  }
  std::size_t plen = 0;
  bool have = false;
  for (const auto* s : int_srcs) {
    if (!have) { plen = s->padded_len(); have = true; }
    else if (s->padded_len() != plen) throw ContractViolation("compress_select_multi: ragged inputs");
  }
  for (const auto* s : real_srcs) {
    if (!have) { plen = s->padded_len(); have = true; }
    else if (s->padded_len() != plen) throw ContractViolation("compress_select_multi: ragged inputs");
  }
  if (mask.capacity() < plen) {
    throw ContractViolation("compress_select_multi: mask shorter than sources");
  }
  constexpr std::size_t kMaxArrays = 16;
  if (int_srcs.size() > kMaxArrays || real_srcs.size() > kMaxArrays) {
    throw ContractViolation("compress_select_multi: too many parallel arrays");
  }
  std::array<const std::int32_t*, kMaxArrays> is{};
  std::array<std::int32_t*, kMaxArrays> id{};
  std::array<const double*, kMaxArrays> rs{};
  std::array<double*, kMaxArrays> rd{};
  const std::size_t ni = int_srcs.size(), nr = real_srcs.size();
  for (std::size_t a = 0; a < ni; ++a) {
    if (int_dsts[a]->capacity() < plen) {
      throw ContractViolation("compress_select_multi: destination capacity too small");
    }
    is[a] = int_srcs[a]->data();
    id[a] = int_dsts[a]->data();
  }
  for (std::size_t a = 0; a < nr; ++a) {
    if (real_dsts[a]->capacity() < plen) {
      throw ContractViolation("compress_select_multi: destination capacity too small");
    }
    rs[a] = real_srcs[a]->data();
    rd[a] = real_dsts[a]->data();
  }
  const std::uint8_t* m = mask.data();
  std::size_t kept = 0;
  // One fused store-then-advance pass: every array shares the kept counter,
  // so a single sweep packs them all.
  for (std::size_t k = 0; k < plen; ++k) {
    for (std::size_t a = 0; a < ni; ++a) id[a][kept] = is[a][k];
    for (std::size_t a = 0; a < nr; ++a) rd[a][kept] = rs[a][k];
    kept += m[k] != 0;
  }
  for (std::size_t a = 0; a < ni; ++a) {
    int_dsts[a]->set_logical_len(kept);
    int_dsts[a]->fill_tail_with_last();
  }
  for (std::size_t a = 0; a < nr; ++a) {
    real_dsts[a]->set_logical_len(kept);
    real_dsts[a]->fill_tail_with_last();
  }
  return kept;
}

}  // namespace mdvec
