#pragma once

#include <complex>
#include <vector>

namespace volterra {

using cplx = std::complex<double>;

// Thin wrapper over FFTW. Forward transforms use the e^{-2 pi i k t / n}
// convention and are unnormalized; inverse transforms divide by the total
// number of points so that inverse(forward(x)) == x.
void fft_forward(std::vector<cplx>& data, const std::vector<int>& dims);
void fft_inverse(std::vector<cplx>& data, const std::vector<int>& dims);

// Cubic shape helper: rank copies of n.
std::vector<int> cube_dims(int rank, int n);

std::vector<cplx> dft(const std::vector<cplx>& x);
std::vector<cplx> idft(const std::vector<cplx>& X);

}  // namespace volterra
