#include "pointersim/fft.hpp"

#include <cmath>

#include "pointersim/errors.hpp"

namespace pointersim::detail {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;

bool is_pow2(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }
} // namespace

Fft::Fft(std::size_t n) : n_(n) {
    if (!is_pow2(n)) throw ConfigError("Fft: size must be a power of two >= 2");

    reversed_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        reversed_[i] = r;
    }

    twiddles_.resize(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j)
        twiddles_[j] = std::polar(1.0, -kTwoPi * static_cast<double>(j) / static_cast<double>(n));
}

void Fft::transform(std::vector<cplx>& a, bool inverse) const {
    if (a.size() != n_) throw ConfigError("Fft: data size mismatch");

    for (std::size_t i = 0; i < n_; ++i)
        if (i < reversed_[i]) std::swap(a[i], a[reversed_[i]]);

    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t stride = n_ / len;
        const std::size_t half = len / 2;
        for (std::size_t block = 0; block < n_; block += len) {
            for (std::size_t j = 0; j < half; ++j) {
                cplx w = twiddles_[j * stride];
                if (inverse) w = std::conj(w);
                const cplx u = a[block + j];
                const cplx v = a[block + j + half] * w;
                a[block + j] = u + v;
                a[block + j + half] = u - v;
            }
        }
    }

    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n_);
        for (cplx& z : a) z *= inv;
    }
}

void Fft::forward(std::vector<cplx>& data) const { transform(data, false); }

void Fft::inverse(std::vector<cplx>& data) const { transform(data, true); }

std::vector<double> fft_wavenumbers(std::size_t n, double dx) {
    std::vector<double> k(n);
    const double dk = kTwoPi / (static_cast<double>(n) * dx);
    for (std::size_t j = 0; j < n; ++j) {
        const auto sj = static_cast<std::ptrdiff_t>(j);
        const auto sn = static_cast<std::ptrdiff_t>(n);
        k[j] = dk * static_cast<double>(sj < sn / 2 ? sj : sj - sn);
    }
    return k;
}

} // namespace pointersim::detail
