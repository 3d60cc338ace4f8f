// spectral.hpp — spectral data of the measured observable and the three
// observable-value functionals that involve no pointer dynamics.
//
// Conventions (natural units, hbar = 1):
//   observable      A|a_i> = a_i|a_i>, optional system phases E_i
//   pre-selection   |psi_i> = sum_j alpha_j |a_j>
//   post-selection  |psi_f> = sum_j beta_j  |a_j>
//
//   expectation            <A>   = sum_j a_j |alpha_j|^2
//   conditional (strong)   <A>_c = sum_j a_j |alpha_j beta_j*|^2 / sum_j |alpha_j beta_j*|^2
//   weak value             <A>_w = sum_j a_j alpha_j beta_j* / sum_j alpha_j beta_j*

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace pointersim {

using cplx = std::complex<double>;

struct SpectralObservable {
    std::vector<double> eigenvalues; // a_i
    std::vector<double> eigenphases; // E_i, default all zero

    explicit SpectralObservable(std::vector<double> a);
    SpectralObservable(std::vector<double> a, std::vector<double> phases);

    std::size_t dim() const { return eigenvalues.size(); }
    double min_eigenvalue() const;
    double max_eigenvalue() const;
    double spectral_range() const { return max_eigenvalue() - min_eigenvalue(); }

    // All pairwise gaps a_i - a_j for i < j.
    std::vector<double> pair_gaps() const;
};

// Complex amplitudes over the eigenbasis. Rescaled to unit norm at
// construction; an all-zero vector is rejected.
struct SelectionState {
    std::vector<cplx> amplitudes;

    explicit SelectionState(std::vector<cplx> amps);

    std::size_t dim() const { return amplitudes.size(); }
};

double expectation_value(const SpectralObservable& obs, const SelectionState& pre);

double conditional_expectation(const SpectralObservable& obs, const SelectionState& pre,
                               const SelectionState& post);

cplx weak_value(const SpectralObservable& obs, const SelectionState& pre,
                const SelectionState& post);

} // namespace pointersim
