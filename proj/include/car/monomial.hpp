#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "car/mode_set.hpp"

namespace car {

enum class Parity { Even, Odd };

/// The four single-mode factors a, a*, a a*, a* a.
enum class FactorKind { Annihilate, Create, Hole, Occupation };

/// Generator parity of a single factor: a and a* are odd, a a* and a* a even.
Parity factor_parity(FactorKind kind);

/// Sign of the graded commutation rule for disjoint supports: -1 iff both odd.
int graded_sign(Parity a, Parity b);

struct MonomialFactor {
    int mode;
    FactorKind kind;
    bool operator==(const MonomialFactor&) const = default;
};

/// Normal-form product of single-mode factors at strictly increasing modes.
/// The empty product is the identity.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<MonomialFactor> factors);

    /// Grammar: whitespace-separated tokens a<k>, a<k>*, n<k> (= a*a), h<k> (= aa*),
    /// with strictly increasing k. The empty string is the identity.
    static Monomial parse(std::string_view text);

    const std::vector<MonomialFactor>& factors() const { return factors_; }
    bool is_identity() const { return factors_.empty(); }
    std::size_t length() const { return factors_.size(); }

    Parity parity() const;
    int odd_factor_count() const;
    int max_mode() const;
    ModeSet support(int ambient) const;

    /// Factor-wise adjoint (a <-> a*, projectors fixed), kept in normal form.
    /// The matrix adjoint equals this monomial's matrix up to the reversal sign.
    Monomial adjoint() const;

    std::string str() const;

    bool operator==(const Monomial&) const = default;

private:
    std::vector<MonomialFactor> factors_;
};

} // namespace car
