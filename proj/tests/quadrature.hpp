// quadrature.hpp — independent numerical-integration oracle for the
// closed-form cross moments: Simpson's rule over pointwise wavefunction
// values, with the momentum operator applied by central finite differences.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "pointersim/pointer.hpp"

namespace testutil {

using pointersim::cplx;
using pointersim::CrossMoment;
using pointersim::GaussianBranch;

template <typename F>
cplx simpson(F f, double lo, double hi, int intervals) {
    if (intervals % 2) ++intervals;
    const double h = (hi - lo) / intervals;
    cplx s = f(lo) + f(hi);
    for (int i = 1; i < intervals; ++i) s += f(lo + h * i) * ((i & 1) ? 4.0 : 2.0);
    return s * (h / 3.0);
}

inline cplx quad_cross_moment(const GaussianBranch& bi, const GaussianBranch& bj,
                              CrossMoment which, int intervals = 40000) {
    const double w = std::max(bi.sigma_t(), bj.sigma_t());
    const double lo = std::min(bi.center, bj.center) - 16.0 * w;
    const double hi = std::max(bi.center, bj.center) + 16.0 * w;
    const double fd = 1e-5; // finite-difference step for p = -i d/dx

    auto f = [&](double x) -> cplx {
        const cplx left = std::conj(bi.at(x));
        switch (which) {
            case CrossMoment::overlap:
                return left * bj.at(x);
            case CrossMoment::x:
                return left * x * bj.at(x);
            case CrossMoment::p: {
                const cplx dpsi = (bj.at(x + fd) - bj.at(x - fd)) / (2.0 * fd);
                return left * cplx{0.0, -1.0} * dpsi;
            }
        }
        return {0.0, 0.0};
    };
    return simpson(f, lo, hi, intervals);
}

} // namespace testutil
