#pragma once
// Data-parallel inner loops used by the forward pass, backprop and updates.
//
// Each kernel has a scalar reference implementation and, where the CPU
// supports it, a vectorized variant (AVX2+FMA on x86-64, NEON on aarch64).
// The active variant is picked once at startup from the CPU features; set
// ZPARAM_ISA=scalar in the environment to pin the scalar reference, which
// gives results that are bit-identical across machines.

#include <cstddef>
#include <span>
#include <string_view>

namespace zparam::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa) noexcept;

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

bool isa_supported(Isa isa) noexcept;

// Throws InvalidArgument when `isa` is not available on this build/CPU.
const KernelTable& table_for(Isa isa);

const KernelTable& active() noexcept;
Isa active_isa() noexcept;

// Switch the process-wide variant. Not meant to be called while other
// threads are running kernels.
void select(Isa isa);

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

} // namespace zparam::kernels
