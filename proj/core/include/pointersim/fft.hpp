// fft.hpp — in-place radix-2 FFT for power-of-two sizes, plus the k-grid
// layout matching its bin ordering. Twiddles come from one precomputed
// std::polar table so repeated transforms do not accumulate recurrence error.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace pointersim::detail {

using cplx = std::complex<double>;

class Fft {
public:
    explicit Fft(std::size_t n); // n must be a power of two >= 2

    void forward(std::vector<cplx>& data) const; // sum_x psi(x) e^{-ikx}
    void inverse(std::vector<cplx>& data) const; // includes the 1/n factor

    std::size_t size() const { return n_; }

private:
    void transform(std::vector<cplx>& data, bool inverse) const;

    std::size_t n_;
    std::vector<std::size_t> reversed_;
    std::vector<cplx> twiddles_; // e^{-2 pi i j / n}, j in [0, n/2)
};

// Wavenumbers k_j = 2 pi j / (n dx) in FFT bin order (negative half aliased).
std::vector<double> fft_wavenumbers(std::size_t n, double dx);

} // namespace pointersim::detail
