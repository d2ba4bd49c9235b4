#pragma once

// Dense-matrix reference implementations. Everything here is O(n^2) or worse
// and is built from explicit cyclic shifts, never from a DFT, so it can check
// the frequency-domain code paths independently.

#include <Eigen/Dense>

#include <span>

#include "cpdsss/types.hpp"

namespace cpdsss::oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

Vector to_eigen(CSpan v);
CVec from_eigen(const Vector& v);

/// n x n matrix whose column i is `first_col` (zero-padded to n) cyclically
/// shifted down by i.
Matrix circulant(CSpan first_col, std::size_t n);
/// The n x n/l expander E_L.
Matrix expander(std::size_t n, std::size_t l);

/// Column stack [A_1; ...; A_M] and row stack [A_1 ... A_M].
Matrix stack_vertical(std::span<const Matrix> blocks);
Matrix stack_horizontal(std::span<const Matrix> blocks);

/// (1/n) log2 det(I + l snr A E_L E_L^H A^H) for an (r x n) effective matrix A
/// (A = HG), by Cholesky of the Hermitian positive definite argument.
double log_det_capacity(const Matrix& effective, std::size_t l, double snr);

/// Largest |a_ij - b_ij| / max(1, max|b|).
double max_rel_error(const Matrix& a, const Matrix& b);
double rel_error(CSpan got, CSpan want);

}  // namespace cpdsss::oracle
