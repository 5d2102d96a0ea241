#include <atomic>
#include <cstdlib>
#include <string>

#include "bulinc/kernels.hpp"

namespace bulinc::kernels {
namespace {

Isa initial_isa() {
  Isa best = detected_isa();
  if (const char* env = std::getenv("BULINC_KERNELS")) {
    if (std::string(env) == "scalar") return Isa::scalar;
  }
  return best;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() { return avx2::available() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void force_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2::available()) isa = Isa::scalar;
  current().store(isa, std::memory_order_relaxed);
}

std::size_t proportional_share_prefix(std::span<const std::int64_t> costs, std::int64_t limit) {
  return active_isa() == Isa::avx2 ? avx2::proportional_share_prefix(costs, limit)
                                   : scalar::proportional_share_prefix(costs, limit);
}

std::size_t first_free_slot(std::span<const std::int64_t> slot_finish, std::int64_t start) {
  return active_isa() == Isa::avx2 ? avx2::first_free_slot(slot_finish, start)
                                   : scalar::first_free_slot(slot_finish, start);
}

std::uint64_t count_below(philox::Key key, std::uint64_t stream, std::uint64_t n, std::uint32_t threshold) {
  return active_isa() == Isa::avx2 ? avx2::count_below(key, stream, n, threshold)
                                   : scalar::count_below(key, stream, n, threshold);
}

}  // namespace bulinc::kernels
