#pragma once

#include <string>

#include "car/car_operator.hpp"
#include "car/mode_set.hpp"

namespace car {

struct StateValidationOptions {
    double hermiticity_tol = 1e-10;
    double positivity_tol = 1e-10;
    double trace_tol = 1e-10;
    double membership_tol = 1e-9;
    double faithfulness_floor = 1e-10;
};

/// Report of the density invariants for an operator claimed to be a state on A(region).
struct StateValidation {
    double hermiticity_delta = 0.0;
    /// Smallest eigenvalue of the compressed proper density (trace-one units).
    double min_eigenvalue = 0.0;
    Complex tau_value{0.0, 0.0};
    double membership_residual = 0.0;
    bool faithful = false;

    bool hermitian_ok = false;
    bool positive_ok = false;
    bool normalized_ok = false;
    bool membership_ok = false;

    bool valid() const { return hermitian_ok && positive_ok && normalized_ok && membership_ok; }
    std::string str() const;
};

StateValidation validate_state(const CarOperator& x, const ModeSet& region,
                               const StateValidationOptions& opts = {});

/// tau-normalized positive element of A(region), kept in the ambient representation.
class StateDensity {
public:
    StateDensity(CarOperator op, ModeSet region, const StateValidationOptions& opts = {});

    static StateDensity tracial(const ModeSet& region);

    const CarOperator& op() const { return op_; }
    const ModeSet& region() const { return region_; }
    int ambient() const { return region_.ambient(); }
    const StateValidation& validation() const { return validation_; }

private:
    CarOperator op_;
    ModeSet region_;
    StateValidation validation_;
};

} // namespace car
