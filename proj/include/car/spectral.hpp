#pragma once

#include "car/car_operator.hpp"

namespace car {

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Matrix eigenvectors;
};

SpectralDecomposition hermitian_eig(const Matrix& x, double hermiticity_tol = 1e-10);
SpectralDecomposition hermitian_eig(const CarOperator& x, double hermiticity_tol = 1e-10);

/// Natural log on the support: eigenvalues below the cutoff map to 0 in the log.
/// Throws if an eigenvalue is materially negative (< -cutoff).
Matrix log_supported(const Matrix& psd, double support_cutoff = 1e-12, bool* cut = nullptr);
CarOperator log_supported(const CarOperator& psd, double support_cutoff = 1e-12, bool* cut = nullptr);

Matrix exp_hermitian(const Matrix& h);
CarOperator exp_hermitian(const CarOperator& h);

} // namespace car
