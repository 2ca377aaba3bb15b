#pragma once

#include <cstddef>

namespace zparam::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);

#if defined(__x86_64__) || defined(_M_X64)
#define ZPARAM_HAVE_AVX2_TU 1
double dot_avx2(const double* a, const double* b, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
#define ZPARAM_HAVE_NEON_TU 1
double dot_neon(const double* a, const double* b, std::size_t n);
void axpy_neon(double alpha, const double* x, double* y, std::size_t n);
#endif

} // namespace zparam::kernels::detail
