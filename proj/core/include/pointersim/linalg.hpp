// linalg.hpp — the one dense kernel the library needs: eigenvalues of a small
// Hermitian matrix, used for positive-semidefiniteness checks.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pointersim/spectral.hpp"

namespace pointersim {

// Eigenvalues (ascending) of a dim x dim Hermitian matrix given row-major.
// Solved by cyclic Jacobi on the real symmetric 2dim x 2dim embedding
// [[Re, -Im], [Im, Re]], whose spectrum is that of the input, doubled.
std::vector<double> hermitian_eigenvalues(std::size_t dim, std::span<const cplx> entries);

} // namespace pointersim
