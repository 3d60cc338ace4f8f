#include "pointersim/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "pointersim/errors.hpp"

namespace pointersim {

namespace {

double off_diagonal_norm(const std::vector<double>& a, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
    return std::sqrt(2.0 * s);
}

} // namespace

std::vector<double> hermitian_eigenvalues(std::size_t dim, std::span<const cplx> entries) {
    if (entries.size() != dim * dim)
        throw ConfigError("hermitian_eigenvalues: entry count does not match dimension");

    const std::size_t n = 2 * dim;
    std::vector<double> a(n * n, 0.0);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const cplx z = entries[i * dim + j];
            a[i * n + j] = z.real();
            a[(i + dim) * n + (j + dim)] = z.real();
            a[i * n + (j + dim)] = -z.imag();
            a[(i + dim) * n + j] = z.imag();
        }
    }

    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    const double stop = std::max(1e-300, 1e-15 * scale);

    for (int sweep = 0; sweep < 100 && off_diagonal_norm(a, n) > stop; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::abs(apq) <= stop / n) continue;
                const double app = a[p * n + p], aqq = a[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }

    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i];
    std::sort(diag.begin(), diag.end());
    // Spectrum is doubled by the embedding; collapse adjacent pairs.
    std::vector<double> ev(dim);
    for (std::size_t i = 0; i < dim; ++i) ev[i] = 0.5 * (diag[2 * i] + diag[2 * i + 1]);
    return ev;
}

} // namespace pointersim
