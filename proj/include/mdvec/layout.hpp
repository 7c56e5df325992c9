#ifndef MDVEC_LAYOUT_HPP
#define MDVEC_LAYOUT_HPP

#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

#include "mdvec/common.hpp"

namespace mdvec {

namespace detail {
// 64-byte aligned allocation, instrumented so tests can assert the
// preallocation contract (no allocation inside reused hot paths).
void* aligned_alloc64(std::size_t bytes);
void aligned_free64(void* p) noexcept;
std::uint64_t allocation_count() noexcept;
}  // namespace detail

struct LaneConfig {
  std::size_t real_lane = 8;   // 8 x 8-byte reals per 512-bit register
  std::size_t int_lane = 16;   // 16 x 4-byte integers

  void validate() const;
};

// Smallest multiple of m that is >= n. m must be a nonzero power of two.
std::size_t pad_count(std::size_t n, std::size_t m);

// Padded, 64-byte aligned array of 64-bit reals. The slots in
// [logical_len, padded_len) are always finite; kernels run full padded
// loops and drop the tail via scale factors.
class PaddedRealArray {
 public:
  PaddedRealArray() = default;
  explicit PaddedRealArray(std::size_t logical_len, std::size_t lane = 8);
  static PaddedRealArray with_capacity(std::size_t cap, std::size_t lane = 8);
  ~PaddedRealArray();

  PaddedRealArray(const PaddedRealArray& other);
  PaddedRealArray& operator=(const PaddedRealArray& other);
  PaddedRealArray(PaddedRealArray&& other) noexcept;
  PaddedRealArray& operator=(PaddedRealArray&& other) noexcept;

  // Does not allocate; requires pad_count(n, lane) <= capacity.
  // Zero-fills [n, padded_len).
  void set_logical_len(std::size_t n);
  // Overwrites the padded tail with the last logical element (0.0 when empty).
  void fill_tail_with_last();

  double* data() noexcept { return data_; }
  const double* data() const noexcept { return data_; }
  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  std::size_t logical_len() const noexcept { return logical_; }
  std::size_t padded_len() const noexcept { return padded_; }
  std::size_t capacity() const noexcept { return cap_; }
  std::size_t lane() const noexcept { return lane_; }

  std::span<double> logical_span() noexcept { return {data_, logical_}; }
  std::span<const double> logical_span() const noexcept { return {data_, logical_}; }

 private:
  double* data_ = nullptr;
  std::size_t logical_ = 0;
  std::size_t padded_ = 0;
  std::size_t cap_ = 0;
  std::size_t lane_ = 8;
};

// Padded, 64-byte aligned array of 32-bit indices. Padded slots hold the
// last valid logical element (0 when empty) so indirect loads through the
// tail stay in range.
class PaddedIndexArray {
 public:
  PaddedIndexArray() = default;
  explicit PaddedIndexArray(std::size_t logical_len, std::size_t lane = 16);
  static PaddedIndexArray with_capacity(std::size_t cap, std::size_t lane = 16);
  ~PaddedIndexArray();

  PaddedIndexArray(const PaddedIndexArray& other);
  PaddedIndexArray& operator=(const PaddedIndexArray& other);
  PaddedIndexArray(PaddedIndexArray&& other) noexcept;
  PaddedIndexArray& operator=(PaddedIndexArray&& other) noexcept;

  void set_logical_len(std::size_t n);
  void fill_tail_with_last();

  std::int32_t* data() noexcept { return data_; }
  const std::int32_t* data() const noexcept { return data_; }
  std::int32_t& operator[](std::size_t i) noexcept { return data_[i]; }
  std::int32_t operator[](std::size_t i) const noexcept { return data_[i]; }

  std::size_t logical_len() const noexcept { return logical_; }
  std::size_t padded_len() const noexcept { return padded_; }
  std::size_t capacity() const noexcept { return cap_; }
  std::size_t lane() const noexcept { return lane_; }

 private:
  std::int32_t* data_ = nullptr;
  std::size_t logical_ = 0;
  std::size_t padded_ = 0;
  std::size_t cap_ = 0;
  std::size_t lane_ = 16;
};

// One byte per lane element, as in the selection loops: the compiler turns
// the conditional increment over these into compress stores.
class Mask {
 public:
  Mask() = default;
  explicit Mask(std::size_t cap);
  ~Mask();

  Mask(const Mask&) = delete;
  Mask& operator=(const Mask&) = delete;
  Mask(Mask&& other) noexcept;
  Mask& operator=(Mask&& other) noexcept;

  std::uint8_t* data() noexcept { return data_; }
  const std::uint8_t* data() const noexcept { return data_; }
  std::uint8_t& operator[](std::size_t i) noexcept { return data_[i]; }
  std::uint8_t operator[](std::size_t i) const noexcept { return data_[i]; }
  std::size_t capacity() const noexcept { return cap_; }

 private:
  std::uint8_t* data_ = nullptr;
  std::size_t cap_ = 0;
};

// mask[k] = values[k] <= threshold for k < logical_len, false over the
// padded tail. count must be a lane multiple covering the padded length.
void build_mask(const PaddedRealArray& values, double threshold,
                std::size_t count, Mask& out);

// Order-preserving pack of the masked elements into dst. Returns the number
// kept; dst gets logical_len = kept and a sentinel-filled tail.
std::size_t compress_select_into(const PaddedIndexArray& src, const Mask& mask,
                                 PaddedIndexArray& dst);
std::size_t compress_select_into(const PaddedRealArray& src, const Mask& mask,
                                 PaddedRealArray& dst);

// Allocating convenience forms.
std::pair<PaddedIndexArray, std::size_t> compress_select(
    const PaddedIndexArray& src, const Mask& mask);

// Packs several parallel arrays under one mask with one shared kept count.
// All sources must share the mask's padded length.
std::size_t compress_select_multi(
    std::span<const PaddedIndexArray* const> int_srcs,
    std::span<const PaddedRealArray* const> real_srcs, const Mask& mask,
    std::span<PaddedIndexArray* const> int_dsts,
    std::span<PaddedRealArray* const> real_dsts);

}  // namespace mdvec

#endif
