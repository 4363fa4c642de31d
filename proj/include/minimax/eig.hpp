#pragma once

#include <complex>
#include <vector>

#include "minimax/dense_matrix.hpp"

namespace minimax {

// All eigenvalues (with multiplicity) of a general real square matrix of
// order <= 400. Balancing, Householder reduction to Hessenberg form, then
// Francis double-shift QR; complex pairs come out as exact conjugates.
// Throws NumericalError if the QR iteration stalls (message carries the order
// of the unreduced block).
std::vector<std::complex<double>> eigenvalues(const DenseMatrix& m);

// Eigenvalues of a symmetric matrix, returned real and sorted ascending.
// Asserts the imaginary parts produced by the general solver are negligible.
std::vector<double> symmetric_eigenvalues(const DenseMatrix& m);

}  // namespace minimax
