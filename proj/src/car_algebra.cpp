#include "car/car_algebra.hpp"

#include <bit>
#include <stdexcept>

namespace car {

namespace {

// Basis index convention: mode 1 is the most significant bit, a set bit means
// the mode is occupied. Diagonal sign strings then read off high bits.
inline int bit_pos(int mode, int ambient) { return ambient - mode; }

void check_mode(int mode, int ambient, const char* what) {
    if (mode < 1 || mode > ambient) {
        throw std::out_of_range(std::string(what) + ": mode " + std::to_string(mode) +
                                " outside [1, " + std::to_string(ambient) + "]");
    }
}

} // namespace

CarOperator annihilator(int mode, int ambient) {
    check_mode(mode, ambient, "annihilator");
    const Eigen::Index dim = Eigen::Index(1) << ambient;
    const int p = bit_pos(mode, ambient);
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        const auto bits = static_cast<std::uint64_t>(c);
        if (!(bits & (std::uint64_t(1) << p))) continue;
        const auto r = static_cast<Eigen::Index>(bits & ~(std::uint64_t(1) << p));
        const int string_bits = std::popcount(bits >> (p + 1));
        m(r, c) = (string_bits % 2 == 0) ? 1.0 : -1.0;
    }
    return CarOperator(ambient, std::move(m));
}

CarOperator creator(int mode, int ambient) { return annihilator(mode, ambient).adjoint(); }

CarOperator v_string(int upto, int ambient) {
    if (upto < 0 || upto > ambient) {
        throw std::out_of_range("v_string: index " + std::to_string(upto) + " outside [0, " +
                                std::to_string(ambient) + "]");
    }
    const Eigen::Index dim = Eigen::Index(1) << ambient;
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        const int occupied = std::popcount(static_cast<std::uint64_t>(r) >> (ambient - upto));
        m(r, r) = (occupied % 2 == 0) ? 1.0 : -1.0;
    }
    return CarOperator(ambient, std::move(m));
}

CarOperator matrix_unit(int site, int row, int col, int ambient) {
    check_mode(site, ambient, "matrix_unit");
    if (row < 1 || row > 2 || col < 1 || col > 2) {
        throw std::out_of_range("matrix_unit: row/col must be 1 or 2");
    }
    const Eigen::Index dim = Eigen::Index(1) << ambient;
    const int p = bit_pos(site, ambient);
    Matrix m = Matrix::Zero(dim, dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        const auto bits = static_cast<std::uint64_t>(c);
        const int occ = static_cast<int>((bits >> p) & 1);
        if (occ != col - 1) continue;
        const auto r = static_cast<Eigen::Index>((bits & ~(std::uint64_t(1) << p)) |
                                                 (std::uint64_t(row - 1) << p));
        m(r, c) = 1.0;
    }
    return CarOperator(ambient, std::move(m));
}

CarOperator factor_matrix(int mode, FactorKind kind, int ambient) {
    switch (kind) {
        case FactorKind::Annihilate: return annihilator(mode, ambient);
        case FactorKind::Create: return creator(mode, ambient);
        case FactorKind::Hole: return matrix_unit(mode, 1, 1, ambient);
        case FactorKind::Occupation: return matrix_unit(mode, 2, 2, ambient);
    }
    throw std::logic_error("factor_matrix: invalid kind");
}

CarOperator monomial_matrix(const Monomial& m, int ambient) {
    if (m.max_mode() > ambient) {
        throw std::out_of_range("monomial_matrix: support exceeds ambient " + std::to_string(ambient));
    }
    CarOperator out = CarOperator::identity(ambient);
    for (const auto& f : m.factors()) {
        out = out * factor_matrix(f.mode, f.kind, ambient);
    }
    return out;
}

CarOperator theta(const ModeSet& flipped, const CarOperator& x) {
    if (flipped.ambient() != x.ambient()) {
        throw std::invalid_argument("theta: ambient mismatch");
    }
    const int n = x.ambient();
    const Eigen::Index dim = x.dim();
    std::uint64_t mask = 0;
    for (int mode : flipped.indices()) mask |= std::uint64_t(1) << bit_pos(mode, n);
    Eigen::VectorXd signs(dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        signs(r) = (std::popcount(static_cast<std::uint64_t>(r) & mask) % 2 == 0) ? 1.0 : -1.0;
    }
    Matrix out = x.matrix();
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            out(r, c) *= signs(r) * signs(c);
        }
    }
    return CarOperator(n, std::move(out));
}

CarOperator even_part(const CarOperator& x) {
    CarOperator flipped = theta(ModeSet::full(x.ambient()), x);
    return 0.5 * (x + flipped);
}

} // namespace car
