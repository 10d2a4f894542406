#include <atomic>
#include <cstdlib>
#include <string_view>

#include "swsched/kernels.hpp"

namespace swsched::kernels {
namespace {

Isa detect() {
  if (const char* env = std::getenv("SWSCHED_ISA"); env && std::string_view(env) == "scalar")
    return Isa::scalar;
  return avx2::available() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool force_isa(Isa isa) {
  if (isa == Isa::avx2 && !avx2::available()) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

void axpy(double* y, double a, const double* x, std::size_t n) {
  if (active_isa() == Isa::avx2) return avx2::axpy(y, a, x, n);
  scalar::axpy(y, a, x, n);
}

double dot(const double* x, const double* y, std::size_t n) {
  if (active_isa() == Isa::avx2) return avx2::dot(x, y, n);
  return scalar::dot(x, y, n);
}

void vecmat(double* y, const double* x, const double* m, std::size_t n) {
  if (active_isa() == Isa::avx2) return avx2::vecmat(y, x, m, n);
  scalar::vecmat(y, x, m, n);
}

}  // namespace swsched::kernels
