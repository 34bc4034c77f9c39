#pragma once

#include <cstdint>
#include <vector>

namespace crysect {

// Counts of q11 x^2 + q12 x y + q22 y^2 over (Z/M)^2, one bucket per value.
// hist is resized to M and overwritten.  The power-of-two M path is
// vectorized when the CPU allows; other moduli take the scalar path.
void quadform_hist(uint64_t q11, uint64_t q12, uint64_t q22, uint64_t M,
                   std::vector<uint64_t>& hist);
void quadform_hist_scalar(uint64_t q11, uint64_t q12, uint64_t q22, uint64_t M,
                          std::vector<uint64_t>& hist);

// out[k] = sum over i + j = k (mod n) of a[i] b[j]; n = a.size() = b.size().
// Vectorized when every entry fits in 32 bits and the CPU allows.
void cyclic_convolve(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b,
                     std::vector<uint64_t>& out);
void cyclic_convolve_scalar(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b,
                            std::vector<uint64_t>& out);

// Whether the vector paths are compiled in and selected on this machine.
bool simd_active();

}  // namespace crysect
