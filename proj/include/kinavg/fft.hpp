#pragma once

#include <complex>
#include <span>
#include <vector>

namespace kinavg {

using cplx = std::complex<double>;

// Unnormalised in-place DFT over the leading `dims` of a row-major array whose
// trailing block of `inner` contiguous entries is left untouched (transformed
// independently for each inner offset). sign = -1 is e^{-i x xi}.
void dft_inplace(std::span<cplx> data, const std::vector<int>& dims, int sign, int inner = 1);

}  // namespace kinavg
