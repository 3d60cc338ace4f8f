#include "pointersim/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "pointersim/errors.hpp"

namespace pointersim {

namespace {

void check_lengths(const SpectralObservable& obs, const SelectionState& sel,
                   const char* who) {
    if (obs.dim() != sel.dim())
        throw ConfigError(std::string(who) + ": selection length " +
                          std::to_string(sel.dim()) + " does not match observable dimension " +
                          std::to_string(obs.dim()));
}

} // namespace

SpectralObservable::SpectralObservable(std::vector<double> a)
    : SpectralObservable(std::move(a), {}) {}

SpectralObservable::SpectralObservable(std::vector<double> a, std::vector<double> phases)
    : eigenvalues(std::move(a)), eigenphases(std::move(phases)) {
    if (eigenvalues.size() < 2)
        throw ConfigError("SpectralObservable: need at least 2 eigenvalues");
    if (eigenphases.empty())
        eigenphases.assign(eigenvalues.size(), 0.0);
    if (eigenphases.size() != eigenvalues.size())
        throw ConfigError("SpectralObservable: eigenphase list length mismatch");
}

double SpectralObservable::min_eigenvalue() const {
    return *std::min_element(eigenvalues.begin(), eigenvalues.end());
}

double SpectralObservable::max_eigenvalue() const {
    return *std::max_element(eigenvalues.begin(), eigenvalues.end());
}

std::vector<double> SpectralObservable::pair_gaps() const {
    std::vector<double> gaps;
    gaps.reserve(dim() * (dim() - 1) / 2);
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = i + 1; j < dim(); ++j)
            gaps.push_back(eigenvalues[i] - eigenvalues[j]);
    return gaps;
}

SelectionState::SelectionState(std::vector<cplx> amps) : amplitudes(std::move(amps)) {
    if (amplitudes.empty())
        throw ConfigError("SelectionState: empty amplitude list");
    double n2 = 0.0;
    for (const cplx& a : amplitudes) n2 += std::norm(a);
    if (n2 <= 0.0)
        throw ConfigError("SelectionState: amplitudes are all zero");
    const double inv = 1.0 / std::sqrt(n2);
    for (cplx& a : amplitudes) a *= inv;
}

double expectation_value(const SpectralObservable& obs, const SelectionState& pre) {
    check_lengths(obs, pre, "expectation_value");
    double v = 0.0;
    for (std::size_t j = 0; j < obs.dim(); ++j)
        v += obs.eigenvalues[j] * std::norm(pre.amplitudes[j]);
    return v;
}

double conditional_expectation(const SpectralObservable& obs, const SelectionState& pre,
                               const SelectionState& post) {
    check_lengths(obs, pre, "conditional_expectation");
    check_lengths(obs, post, "conditional_expectation");
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < obs.dim(); ++j) {
        const double w = std::norm(pre.amplitudes[j] * std::conj(post.amplitudes[j]));
        num += obs.eigenvalues[j] * w;
        den += w;
    }
    if (den <= 1e-30)
        throw DegeneratePostSelectionError(
            "conditional_expectation: selections are component-wise orthogonal");
    return num / den;
}

cplx weak_value(const SpectralObservable& obs, const SelectionState& pre,
                const SelectionState& post) {
    check_lengths(obs, pre, "weak_value");
    check_lengths(obs, post, "weak_value");
    cplx num{0.0, 0.0}, den{0.0, 0.0};
    for (std::size_t j = 0; j < obs.dim(); ++j) {
        const cplx w = pre.amplitudes[j] * std::conj(post.amplitudes[j]);
        num += obs.eigenvalues[j] * w;
        den += w;
    }
    if (std::abs(den) < 1e-14)
        throw OrthogonalSelectionError("weak_value: <psi_f|psi_i> = 0");
    return num / den;
}

} // namespace pointersim
