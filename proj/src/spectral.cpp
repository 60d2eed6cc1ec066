#include "car/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace car {

SpectralDecomposition hermitian_eig(const Matrix& x, double hermiticity_tol) {
    const double delta = (x - x.adjoint()).cwiseAbs().maxCoeff();
    if (delta > hermiticity_tol) {
        throw std::invalid_argument("hermitian_eig: input is not Hermitian (delta " +
                                    std::to_string(delta) + ")");
    }
    Matrix sym = 0.5 * (x + x.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eig: eigensolver failed");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

SpectralDecomposition hermitian_eig(const CarOperator& x, double hermiticity_tol) {
    return hermitian_eig(x.matrix(), hermiticity_tol);
}

Matrix log_supported(const Matrix& psd, double support_cutoff, bool* cut) {
    SpectralDecomposition eig = hermitian_eig(psd);
    if (cut) *cut = false;
    Eigen::VectorXd mapped(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        const double lambda = eig.eigenvalues(i);
        if (lambda < -support_cutoff) {
            throw std::domain_error("log_supported: eigenvalue " + std::to_string(lambda) +
                                    " is materially negative");
        }
        if (lambda < support_cutoff) {
            mapped(i) = 0.0;
            if (cut) *cut = true;
        } else {
            mapped(i) = std::log(lambda);
        }
    }
    return eig.eigenvectors * mapped.asDiagonal() * eig.eigenvectors.adjoint();
}

CarOperator log_supported(const CarOperator& psd, double support_cutoff, bool* cut) {
    return CarOperator(psd.ambient(), log_supported(psd.matrix(), support_cutoff, cut));
}

Matrix exp_hermitian(const Matrix& h) {
    SpectralDecomposition eig = hermitian_eig(h);
    Eigen::VectorXd mapped = eig.eigenvalues.array().exp();
    return eig.eigenvectors * mapped.asDiagonal() * eig.eigenvectors.adjoint();
}

CarOperator exp_hermitian(const CarOperator& h) {
    return CarOperator(h.ambient(), exp_hermitian(h.matrix()));
}

} // namespace car
