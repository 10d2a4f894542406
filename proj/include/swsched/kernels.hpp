#pragma once

#include <cstddef>
#include <string_view>

// Dense vector primitives used by the simplex tableau and the Markov-chain
// iterations. Each has a portable scalar version and, where the CPU allows,
// an AVX2 version picked once at startup.
namespace swsched::kernels {

enum class Isa { scalar, avx2 };

// y[i] += a * x[i]
void axpy(double* y, double a, const double* x, std::size_t n);
// sum of x[i] * y[i]
double dot(const double* x, const double* y, std::size_t n);
// y[j] = sum_i x[i] * m[i*n + j]  (row vector times row-major n x n matrix)
void vecmat(double* y, const double* x, const double* m, std::size_t n);

Isa active_isa();
std::string_view isa_name(Isa isa);
// Forces a backend; returns false when the CPU lacks it. Intended for tests.
bool force_isa(Isa isa);

namespace scalar {
void axpy(double* y, double a, const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void vecmat(double* y, const double* x, const double* m, std::size_t n);
}  // namespace scalar

namespace avx2 {
bool available();
void axpy(double* y, double a, const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void vecmat(double* y, const double* x, const double* m, std::size_t n);
}  // namespace avx2

}  // namespace swsched::kernels
