#include "zparam/kernels.hpp"

#include "kernels_impl.hpp"
#include "zparam/error.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace zparam::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar, detail::dot_scalar, detail::axpy_scalar};
#ifdef ZPARAM_HAVE_AVX2_TU
constexpr KernelTable kAvx2{Isa::avx2, detail::dot_avx2, detail::axpy_avx2};
#endif
#ifdef ZPARAM_HAVE_NEON_TU
constexpr KernelTable kNeon{Isa::neon, detail::dot_neon, detail::axpy_neon};
#endif

const KernelTable* pick_default() {
  if (const char* env = std::getenv("ZPARAM_ISA")) {
    const std::string want(env);
    if (want == "scalar")
      return &kScalar;
    if (want == "avx2" && isa_supported(Isa::avx2))
      return &table_for(Isa::avx2);
    if (want == "neon" && isa_supported(Isa::neon))
      return &table_for(Isa::neon);
  }
  if (isa_supported(Isa::avx2))
    return &table_for(Isa::avx2);
  if (isa_supported(Isa::neon))
    return &table_for(Isa::neon);
  return &kScalar;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{pick_default()};
  return table;
}

} // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
  case Isa::scalar: return "scalar";
  case Isa::avx2: return "avx2";
  case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
  case Isa::scalar:
    return true;
  case Isa::avx2:
#if defined(ZPARAM_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
  case Isa::neon:
#ifdef ZPARAM_HAVE_NEON_TU
    return true;
#else
    return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!isa_supported(isa))
    throw InvalidArgument("instruction set not available: " + std::string(isa_name(isa)));
  switch (isa) {
#ifdef ZPARAM_HAVE_AVX2_TU
  case Isa::avx2: return kAvx2;
#endif
#ifdef ZPARAM_HAVE_NEON_TU
  case Isa::neon: return kNeon;
#endif
  default: return kScalar;
  }
}

const KernelTable& active() noexcept { return *current().load(std::memory_order_relaxed); }

Isa active_isa() noexcept { return active().isa; }

void select(Isa isa) { current().store(&table_for(isa), std::memory_order_relaxed); }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw ShapeMismatch("dot: length " + std::to_string(a.size()) + " vs " +
                        std::to_string(b.size()));
  return active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size())
    throw ShapeMismatch("axpy: length " + std::to_string(x.size()) + " vs " +
                        std::to_string(y.size()));
  active().axpy(alpha, x.data(), y.data(), x.size());
}

} // namespace zparam::kernels
