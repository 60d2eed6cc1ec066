#include "car/entropy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "car/format.hpp"
#include "car/spectral.hpp"
#include "car/subalgebra.hpp"

namespace car {

namespace {

double xlogx_sum(const Eigen::VectorXd& eigenvalues, double cutoff) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        const double lambda = eigenvalues(i);
        if (lambda > cutoff) acc += lambda * std::log(lambda);
    }
    return acc;
}

// tau(X log Y) computed in Y's eigenbasis; weights are the diagonal of U* X U.
// Returns +infinity when X has material weight outside Y's support.
double tau_x_log_y(const Matrix& x, const SpectralDecomposition& y_eig, const EntropyOptions& opts) {
    const Matrix transformed = y_eig.eigenvectors.adjoint() * x * y_eig.eigenvectors;
    const double dim = static_cast<double>(x.rows());
    double acc = 0.0;
    double leak = 0.0;
    for (Eigen::Index i = 0; i < y_eig.eigenvalues.size(); ++i) {
        const double mu = y_eig.eigenvalues(i);
        const double w = transformed(i, i).real();
        if (mu > opts.support_cutoff) {
            acc += w * std::log(mu);
        } else {
            leak += std::abs(w);
        }
    }
    if (leak / dim > opts.support_leak_tol) return std::numeric_limits<double>::infinity();
    return acc / dim;
}

} // namespace

double von_neumann_entropy(const StateDensity& state, const EntropyOptions& opts) {
    SpectralDecomposition eig = hermitian_eig(state.op());
    const double dim = static_cast<double>(state.op().dim());
    const double tau_dlogd = xlogx_sum(eig.eigenvalues, opts.support_cutoff) / dim;
    return state.region().size() * std::log(2.0) - tau_dlogd;
}

double relative_entropy(const StateDensity& d1, const StateDensity& d2, const EntropyOptions& opts) {
    if (!(d1.region() == d2.region())) {
        throw std::invalid_argument("relative_entropy: states live on different regions");
    }
    SpectralDecomposition eig1 = hermitian_eig(d1.op());
    const double dim = static_cast<double>(d1.op().dim());
    const double tau_d1logd1 = xlogx_sum(eig1.eigenvalues, opts.support_cutoff) / dim;

    SpectralDecomposition eig2 = hermitian_eig(d2.op());
    const double cross = tau_x_log_y(d1.op().matrix(), eig2, opts);
    if (std::isinf(cross)) return std::numeric_limits<double>::infinity();
    return tau_d1logd1 - cross;
}

double klein_gap(const CarOperator& a, const CarOperator& b, const EntropyOptions& opts) {
    require_same_ambient(a, b, "klein_gap");
    SpectralDecomposition eig_a = hermitian_eig(a);
    SpectralDecomposition eig_b = hermitian_eig(b);
    if (eig_a.eigenvalues(0) < -opts.support_cutoff || eig_b.eigenvalues(0) < -opts.support_cutoff) {
        throw std::domain_error("klein_gap: operands must be positive semidefinite");
    }
    const double dim = static_cast<double>(a.dim());
    const double tau_aloga = xlogx_sum(eig_a.eigenvalues, opts.support_cutoff) / dim;
    const double cross = tau_x_log_y(a.matrix(), eig_b, opts);
    if (std::isinf(cross)) {
        throw std::domain_error("klein_gap: support of the first operand leaks outside the second");
    }
    const double tau_a = tau(a).real();
    const double tau_b = tau(b).real();
    return tau_aloga - cross - (tau_a - tau_b);
}

Matrix t_map(const Matrix& a, const Matrix& k) {
    if (a.rows() != k.rows() || a.cols() != k.cols()) {
        throw std::invalid_argument("t_map: dimension mismatch");
    }
    SpectralDecomposition eig = hermitian_eig(a);
    if (eig.eigenvalues(0) <= 0.0) {
        throw std::domain_error("t_map: operator is not positive definite");
    }
    Matrix transformed = eig.eigenvectors.adjoint() * k * eig.eigenvectors;
    for (Eigen::Index i = 0; i < transformed.rows(); ++i) {
        for (Eigen::Index j = 0; j < transformed.cols(); ++j) {
            const double li = eig.eigenvalues(i);
            const double lj = eig.eigenvalues(j);
            const double d = li - lj;
            const double c = (d == 0.0) ? 1.0 / li : std::log1p(d / lj) / d;
            transformed(i, j) *= c;
        }
    }
    return eig.eigenvectors * transformed * eig.eigenvectors.adjoint();
}

CarOperator t_map(const CarOperator& a, const CarOperator& k) {
    require_same_ambient(a, k, "t_map");
    return CarOperator(a.ambient(), t_map(a.matrix(), k.matrix()));
}

double lieb_inequality_gap(const CarOperator& a, const CarOperator& b, const CarOperator& c) {
    require_same_ambient(a, b, "lieb_inequality_gap");
    require_same_ambient(a, c, "lieb_inequality_gap");
    const Matrix exp_minus_a = exp_hermitian(Matrix(-a.matrix()));
    const Matrix exp_b = exp_hermitian(b.matrix());
    const Matrix exp_c = exp_hermitian(c.matrix());
    const Matrix transported = t_map(exp_minus_a, exp_b);
    const double lhs = (exp_c * transported).trace().real();
    const double rhs = exp_hermitian(Matrix(a.matrix() + b.matrix() + c.matrix())).trace().real();
    return lhs - rhs;
}

namespace {

// log of a restricted density, taken in the compressed representation of its
// region and embedded back into the ambient algebra.
CarOperator embedded_log(const StateDensity& state, const EntropyOptions& opts) {
    const Matrix compressed = compress(state.op(), state.region());
    const Matrix logm = log_supported(compressed, opts.support_cutoff);
    return embed(logm, state.region(), state.ambient());
}

} // namespace

SsaReport ssa_report(const StateDensity& state, const RegionPair& regions, const EntropyOptions& opts) {
    if (!(state.region() == regions.union_set())) {
        throw std::invalid_argument("ssa_report: state must live on I union J");
    }
    const StateDensity d_i = restrict_state(state, regions.I);
    const StateDensity d_j = restrict_state(state, regions.J);
    const StateDensity d_int = restrict_state(state, regions.intersection());

    SsaReport report;
    report.s_union = von_neumann_entropy(state, opts);
    report.s_i = von_neumann_entropy(d_i, opts);
    report.s_j = von_neumann_entropy(d_j, opts);
    report.s_intersection = von_neumann_entropy(d_int, opts);
    report.gap = report.s_union - report.s_i - report.s_j + report.s_intersection;
    report.min_eigenvalue = state.validation().min_eigenvalue;
    report.faithful = report.min_eigenvalue > opts.faithfulness_floor;

    if (report.faithful) {
        const CarOperator log_union = embedded_log(state, opts);
        const CarOperator log_i = embedded_log(d_i, opts);
        const CarOperator log_j = embedded_log(d_j, opts);
        const CarOperator log_int = embedded_log(d_int, opts);
        report.equality_residual = (log_union + log_int - log_i - log_j).hs_norm();
    }
    return report;
}

std::string SsaReport::str() const {
    std::string out;
    out += "gap=" + format_sci(gap) + "\n";
    out += "s_union=" + format_sci(s_union) + "\n";
    out += "s_i=" + format_sci(s_i) + "\n";
    out += "s_j=" + format_sci(s_j) + "\n";
    out += "s_int=" + format_sci(s_intersection) + "\n";
    out += "residual=" + (equality_residual ? format_sci(*equality_residual) : std::string("not_evaluated")) + "\n";
    out += "faithful=" + std::string(faithful ? "true" : "false") + "\n";
    out += "min_eig=" + format_sci(min_eigenvalue) + "\n";
    return out;
}

EqualityDiagnostics equality_check(const StateDensity& state, const RegionPair& regions, double tol,
                                   const EntropyOptions& opts) {
    SsaReport report = ssa_report(state, regions, opts);
    if (!report.equality_residual) {
        throw std::domain_error("equality_check: state is not faithful; regularize first");
    }
    return {*report.equality_residual <= tol, report.gap, *report.equality_residual};
}

StateDensity regularized(const StateDensity& state, double eps) {
    if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("regularized: eps must be in (0, 1)");
    CarOperator mixed = (1.0 - eps) * state.op() + eps * CarOperator::identity(state.ambient());
    return StateDensity(std::move(mixed), state.region());
}

} // namespace car
