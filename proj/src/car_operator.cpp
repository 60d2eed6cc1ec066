#include "car/car_operator.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace car {

int ambient_cap() {
    static const int cap = [] {
        if (const char* env = std::getenv("CAR_ENTROPY_MAX_N")) {
            int value = std::atoi(env);
            if (value >= 1 && value <= 16) return value;
        }
        return 10;
    }();
    return cap;
}

CarOperator::CarOperator(int ambient, Matrix matrix) : ambient_(ambient), matrix_(std::move(matrix)) {
    if (ambient < 1 || ambient > ambient_cap()) {
        throw std::invalid_argument("CarOperator: ambient " + std::to_string(ambient) +
                                    " outside [1, " + std::to_string(ambient_cap()) + "]");
    }
    const Eigen::Index dim = Eigen::Index(1) << ambient;
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
        throw std::invalid_argument("CarOperator: matrix must be " + std::to_string(dim) + "x" +
                                    std::to_string(dim));
    }
}

CarOperator CarOperator::identity(int ambient) {
    const Eigen::Index dim = Eigen::Index(1) << ambient;
    return CarOperator(ambient, Matrix::Identity(dim, dim));
}

CarOperator CarOperator::zero(int ambient) {
    const Eigen::Index dim = Eigen::Index(1) << ambient;
    return CarOperator(ambient, Matrix::Zero(dim, dim));
}

CarOperator CarOperator::adjoint() const { return CarOperator(ambient_, matrix_.adjoint()); }

CarOperator& CarOperator::operator+=(const CarOperator& other) {
    require_same_ambient(*this, other, "operator+");
    matrix_ += other.matrix_;
    return *this;
}

CarOperator& CarOperator::operator-=(const CarOperator& other) {
    require_same_ambient(*this, other, "operator-");
    matrix_ -= other.matrix_;
    return *this;
}

CarOperator& CarOperator::operator*=(Complex scale) {
    matrix_ *= scale;
    return *this;
}

double CarOperator::hs_norm() const {
    const double dim = static_cast<double>(matrix_.rows());
    return matrix_.norm() / std::sqrt(dim);
}

double CarOperator::max_abs() const {
    return matrix_.cwiseAbs().maxCoeff();
}

double CarOperator::hermiticity_delta() const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

CarOperator operator+(CarOperator a, const CarOperator& b) { return a += b; }
CarOperator operator-(CarOperator a, const CarOperator& b) { return a -= b; }

CarOperator operator*(const CarOperator& a, const CarOperator& b) {
    require_same_ambient(a, b, "operator*");
    return CarOperator(a.ambient(), a.matrix() * b.matrix());
}

CarOperator operator*(Complex scale, CarOperator a) { return a *= scale; }
CarOperator operator*(CarOperator a, Complex scale) { return a *= scale; }
CarOperator operator*(double scale, CarOperator a) { return a *= Complex(scale, 0.0); }

Complex tau(const CarOperator& x) {
    return x.matrix().trace() / static_cast<double>(x.dim());
}

void require_same_ambient(const CarOperator& a, const CarOperator& b, const char* what) {
    if (a.ambient() != b.ambient()) {
        throw std::invalid_argument(std::string(what) + ": ambient mismatch (" +
                                    std::to_string(a.ambient()) + " vs " + std::to_string(b.ambient()) + ")");
    }
}

} // namespace car
