// Single-line window filters shared by the scalar table and the AVX2
// remainder path.
#pragma once

#include <cstddef>
#include <vector>

namespace flagwave::simd::detail {

void window_max_line(double* base, std::size_t len, std::size_t stride,
                     std::size_t before, std::size_t after,
                     std::vector<double>& scratch);
void window_sum_line(double* base, std::size_t len, std::size_t stride,
                     std::size_t before, std::size_t after,
                     std::vector<double>& scratch);

}  // namespace flagwave::simd::detail
