#include "bulinc/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

#include <bit>

namespace bulinc::kernels::avx2 {
namespace {

struct HiLo {
  __m256i hi;
  __m256i lo;
};

// 32x32 -> 64 multiply of all eight 32-bit lanes by a constant.
inline HiLo mulhilo(__m256i x, __m256i mul) {
  __m256i even = _mm256_mul_epu32(x, mul);
  __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(x, 32), mul);
  return {_mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA),
          _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0xAA)};
}

inline int count_lt_u32(__m256i words, __m256i threshold_biased) {
  const __m256i bias = _mm256_set1_epi32(static_cast<int>(0x80000000u));
  __m256i lt = _mm256_cmpgt_epi32(threshold_biased, _mm256_xor_si256(words, bias));
  return std::popcount(static_cast<unsigned>(_mm256_movemask_ps(_mm256_castsi256_ps(lt))));
}

}  // namespace

bool available() { return __builtin_cpu_supports("avx2"); }

std::size_t proportional_share_prefix(std::span<const std::int64_t> costs, std::int64_t limit) {
  if (costs.size() >= (std::size_t{1} << 31)) return scalar::proportional_share_prefix(costs, limit);
  const __m256i limitv = _mm256_set1_epi64x(limit);
  const __m256i step = _mm256_set1_epi64x(4);
  __m256i kv = _mm256_setr_epi64x(1, 2, 3, 4);
  std::size_t i = 0;
  for (; i + 4 <= costs.size(); i += 4) {
    __m256i c = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(costs.data() + i));
    __m256i prod = _mm256_mul_epu32(c, kv);
    int fail = _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpgt_epi64(prod, limitv)));
    if (fail != 0) return i + static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(fail)));
    kv = _mm256_add_epi64(kv, step);
  }
  for (; i < costs.size(); ++i) {
    if (costs[i] * static_cast<std::int64_t>(i + 1) > limit) return i;
  }
  return costs.size();
}

std::size_t first_free_slot(std::span<const std::int64_t> slot_finish, std::int64_t start) {
  const __m256i startv = _mm256_set1_epi64x(start);
  std::size_t i = 0;
  for (; i + 4 <= slot_finish.size(); i += 4) {
    __m256i f = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(slot_finish.data() + i));
    int free = _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpgt_epi64(startv, f)));
    if (free != 0) return i + static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(free)));
  }
  for (; i < slot_finish.size(); ++i) {
    if (slot_finish[i] < start) return i;
  }
  return slot_finish.size();
}

std::uint64_t count_below(philox::Key key, std::uint64_t stream, std::uint64_t n, std::uint32_t threshold) {
  const __m256i mul0 = _mm256_set1_epi64x(philox::kMul0);
  const __m256i mul1 = _mm256_set1_epi64x(philox::kMul1);
  const __m256i stream_lo = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(stream)));
  const __m256i stream_hi = _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(stream >> 32)));
  const __m256i thr = _mm256_set1_epi32(static_cast<int>(threshold ^ 0x80000000u));

  std::uint64_t hits = 0;
  const std::uint64_t groups = n / 32;  // 8 blocks of 4 words
  for (std::uint64_t g = 0; g < groups; ++g) {
    alignas(32) std::uint32_t lo[8];
    alignas(32) std::uint32_t hi[8];
    for (int j = 0; j < 8; ++j) {
      std::uint64_t b = g * 8 + static_cast<std::uint64_t>(j);
      lo[j] = static_cast<std::uint32_t>(b);
      hi[j] = static_cast<std::uint32_t>(b >> 32);
    }
    __m256i c0 = _mm256_load_si256(reinterpret_cast<const __m256i*>(lo));
    __m256i c1 = _mm256_load_si256(reinterpret_cast<const __m256i*>(hi));
    __m256i c2 = stream_lo;
    __m256i c3 = stream_hi;
    std::uint32_t k0 = key[0];
    std::uint32_t k1 = key[1];
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        k0 += philox::kWeyl0;
        k1 += philox::kWeyl1;
      }
      HiLo p0 = mulhilo(c0, mul0);
      HiLo p1 = mulhilo(c2, mul1);
      __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(p1.hi, c1), _mm256_set1_epi32(static_cast<int>(k0)));
      __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(p0.hi, c3), _mm256_set1_epi32(static_cast<int>(k1)));
      c0 = n0;
      c1 = p1.lo;
      c2 = n2;
      c3 = p0.lo;
    }
    hits += static_cast<std::uint64_t>(count_lt_u32(c0, thr) + count_lt_u32(c1, thr) + count_lt_u32(c2, thr) +
                                       count_lt_u32(c3, thr));
  }

  for (std::uint64_t pos = groups * 32; pos < n;) {
    std::uint64_t b = pos / 4;
    auto words = philox::block(philox::counter_for(stream, b), key);
    for (std::uint64_t j = 0; j < 4 && pos < n; ++j, ++pos) hits += words[j] < threshold;
  }
  return hits;
}

}  // namespace bulinc::kernels::avx2

#else

namespace bulinc::kernels::avx2 {

bool available() { return false; }
std::size_t proportional_share_prefix(std::span<const std::int64_t> costs, std::int64_t limit) {
  return scalar::proportional_share_prefix(costs, limit);
}
std::size_t first_free_slot(std::span<const std::int64_t> slot_finish, std::int64_t start) {
  return scalar::first_free_slot(slot_finish, start);
}
std::uint64_t count_below(philox::Key key, std::uint64_t stream, std::uint64_t n, std::uint32_t threshold) {
  return scalar::count_below(key, stream, n, threshold);
}

}  // namespace bulinc::kernels::avx2

#endif
