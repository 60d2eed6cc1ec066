#pragma once

#include <Eigen/Dense>
#include <complex>

namespace car {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Largest ambient mode count accepted for dense matrices.
/// Defaults to 10, overridable through the CAR_ENTROPY_MAX_N environment variable.
int ambient_cap();

/// Dense 2^n x 2^n matrix realizing an element of the n-mode algebra.
class CarOperator {
public:
    CarOperator(int ambient, Matrix matrix);

    static CarOperator identity(int ambient);
    static CarOperator zero(int ambient);

    int ambient() const { return ambient_; }
    Eigen::Index dim() const { return matrix_.rows(); }
    const Matrix& matrix() const { return matrix_; }

    CarOperator adjoint() const;

    CarOperator& operator+=(const CarOperator& other);
    CarOperator& operator-=(const CarOperator& other);
    CarOperator& operator*=(Complex scale);

    /// Hilbert-Schmidt norm under the tracial state, sqrt(tau(X* X)).
    double hs_norm() const;
    /// Largest entry magnitude; the right metric for exact integer identities.
    double max_abs() const;
    /// max |X - X*| entrywise.
    double hermiticity_delta() const;

private:
    int ambient_;
    Matrix matrix_;
};

CarOperator operator+(CarOperator a, const CarOperator& b);
CarOperator operator-(CarOperator a, const CarOperator& b);
CarOperator operator*(const CarOperator& a, const CarOperator& b);
CarOperator operator*(Complex scale, CarOperator a);
CarOperator operator*(CarOperator a, Complex scale);
CarOperator operator*(double scale, CarOperator a);

/// The unique tracial state: matrix trace divided by 2^n.
Complex tau(const CarOperator& x);

void require_same_ambient(const CarOperator& a, const CarOperator& b, const char* what);

} // namespace car
