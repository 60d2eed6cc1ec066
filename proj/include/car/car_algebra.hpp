#pragma once

#include "car/car_operator.hpp"
#include "car/mode_set.hpp"
#include "car/monomial.hpp"

namespace car {

/// Jordan-Wigner matrix of the annihilator a_i on n modes.
CarOperator annihilator(int mode, int ambient);

/// Matrix of the creator a_i*.
CarOperator creator(int mode, int ambient);

/// V_i = prod_{j<=i} (1 - 2 a_j* a_j); V_0 is the identity.
CarOperator v_string(int upto, int ambient);

/// Matrix unit e^(site)_{row,col} with row, col in {1, 2}.
/// e11 = a a*, e12 = V_{site-1} a, e21 = V_{site-1} a*, e22 = a* a.
CarOperator matrix_unit(int site, int row, int col, int ambient);

/// Matrix of a single factor at one mode.
CarOperator factor_matrix(int mode, FactorKind kind, int ambient);

/// Left-to-right product of the factor matrices; the empty monomial is the identity.
CarOperator monomial_matrix(const Monomial& m, int ambient);

/// Parity automorphism Theta_J: flips the sign of a_i for i in the flipped set,
/// realized as conjugation by prod_{j in J} (1 - 2 a_j* a_j).
CarOperator theta(const ModeSet& flipped, const CarOperator& x);

/// Expectation onto the even part, (X + Theta(X)) / 2 over the full mode range.
CarOperator even_part(const CarOperator& x);

} // namespace car
