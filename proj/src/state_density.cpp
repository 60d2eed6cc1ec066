#include "car/state_density.hpp"

#include <sstream>
#include <stdexcept>

#include "car/spectral.hpp"
#include "car/subalgebra.hpp"

namespace car {

StateValidation validate_state(const CarOperator& x, const ModeSet& region,
                               const StateValidationOptions& opts) {
    if (x.ambient() != region.ambient()) {
        throw std::invalid_argument("validate_state: ambient mismatch");
    }
    StateValidation report;
    report.hermiticity_delta = x.hermiticity_delta();
    report.tau_value = tau(x);
    report.membership_residual = membership_residual(x, region);
    report.hermitian_ok = report.hermiticity_delta <= opts.hermiticity_tol;
    report.normalized_ok = std::abs(report.tau_value - Complex(1.0, 0.0)) <= opts.trace_tol;
    report.membership_ok = report.membership_residual <= opts.membership_tol;

    if (report.hermitian_ok) {
        const Matrix compressed = compress(x, region);
        const double proper_scale = static_cast<double>(compressed.rows());
        SpectralDecomposition eig = hermitian_eig(compressed, 10.0 * opts.hermiticity_tol + 1e-9);
        report.min_eigenvalue = eig.eigenvalues(0) / proper_scale;
        report.positive_ok = report.min_eigenvalue >= -opts.positivity_tol;
        report.faithful = report.min_eigenvalue > opts.faithfulness_floor;
    } else {
        report.min_eigenvalue = 0.0;
        report.positive_ok = false;
        report.faithful = false;
    }
    return report;
}

std::string StateValidation::str() const {
    std::ostringstream out;
    out << "hermiticity_delta=" << hermiticity_delta
        << " min_eigenvalue=" << min_eigenvalue
        << " tau=" << tau_value.real() << (tau_value.imag() < 0 ? "-" : "+")
        << std::abs(tau_value.imag()) << "j"
        << " membership_residual=" << membership_residual
        << " faithful=" << (faithful ? "true" : "false")
        << " valid=" << (valid() ? "true" : "false");
    return out.str();
}

StateDensity::StateDensity(CarOperator op, ModeSet region, const StateValidationOptions& opts)
    : op_(std::move(op)), region_(std::move(region)), validation_(validate_state(op_, region_, opts)) {
    if (!validation_.valid()) {
        throw std::invalid_argument("StateDensity: invalid state (" + validation_.str() + ")");
    }
}

StateDensity StateDensity::tracial(const ModeSet& region) {
    return StateDensity(CarOperator::identity(region.ambient()), region);
}

} // namespace car
