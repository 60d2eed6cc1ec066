#include "car/subalgebra.hpp"

#include <array>
#include <map>
#include <mutex>
#include <stdexcept>

#include "car/car_algebra.hpp"

namespace car {

namespace {

// Row-major 2x2 complex matrix, enough for the per-site factor algebra.
using Local = std::array<Complex, 4>;

constexpr Local kIdentity{1.0, 0.0, 0.0, 1.0};
constexpr Local kSigmaZ{1.0, 0.0, 0.0, -1.0};

Local mul(const Local& a, const Local& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

// Orthonormalized per-site factors: tau-norm one each.
Local local_for_kind(std::uint8_t kind) {
    const double rt2 = std::sqrt(2.0);
    switch (kind) {
        case 0: return kIdentity;
        case 1: return {0.0, rt2, 0.0, 0.0};   // sqrt(2) a
        case 2: return {0.0, 0.0, rt2, 0.0};   // sqrt(2) a*
        case 3: return {-1.0, 0.0, 0.0, 1.0};  // 2 a*a - 1
    }
    throw std::logic_error("local_for_kind: invalid kind");
}

bool kind_is_odd(std::uint8_t kind) { return kind == 1 || kind == 2; }

// Basis cache, keyed by (ambient, region mask). Read-mostly; results are
// identical with and without it.
std::mutex g_cache_mutex;
std::map<std::pair<int, std::uint32_t>, std::shared_ptr<const MonomialBasis>>& cache_map() {
    static std::map<std::pair<int, std::uint32_t>, std::shared_ptr<const MonomialBasis>> map;
    return map;
}

// Bases whose total sparse payload would exceed this entry count are streamed.
constexpr std::uint64_t kMaterializeEntryLimit = std::uint64_t(1) << 22;

} // namespace

Parity BasisElement::parity() const {
    int odd = 0;
    for (std::uint8_t k : kinds) odd += kind_is_odd(k) ? 1 : 0;
    return (odd % 2 == 0) ? Parity::Even : Parity::Odd;
}

Parity BasisElement::parity_in(const ModeSet& region, const ModeSet& sub) const {
    int odd = 0;
    const auto& modes = region.indices();
    for (std::size_t j = 0; j < kinds.size(); ++j) {
        if (kind_is_odd(kinds[j]) && sub.contains(modes[j])) ++odd;
    }
    return (odd % 2 == 0) ? Parity::Even : Parity::Odd;
}

std::string BasisElement::label(const ModeSet& region) const {
    std::string out;
    const auto& modes = region.indices();
    for (std::size_t j = 0; j < kinds.size(); ++j) {
        if (kinds[j] == 0) continue;
        if (!out.empty()) out += ' ';
        switch (kinds[j]) {
            case 1: out += 'a' + std::to_string(modes[j]); break;
            case 2: out += 'a' + std::to_string(modes[j]) + '*'; break;
            case 3: out += 'd' + std::to_string(modes[j]); break;
        }
    }
    return out.empty() ? std::string("1") : out;
}

Matrix BasisElement::dense(Eigen::Index dim) const {
    Matrix out = Matrix::Zero(dim, dim);
    for (const auto& e : entries) out(e.row, e.col) += e.value;
    return out;
}

MonomialBasis::MonomialBasis(ModeSet region) : region_(std::move(region)) {
    const int n = region_.ambient();
    const std::uint64_t worst_entries = (std::uint64_t(1) << (2 * region_.size())) * (std::uint64_t(1) << n);
    materialized_ = worst_entries <= kMaterializeEntryLimit;
    if (materialized_) {
        elements_.reserve(size());
        for (std::size_t k = 0; k < size(); ++k) elements_.push_back(build_element(k));
    }
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(const ModeSet& region) {
    const auto key = std::make_pair(region.ambient(), region.mask());
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto& map = cache_map();
    auto it = map.find(key);
    if (it != map.end()) return it->second;
    auto basis = std::shared_ptr<const MonomialBasis>(new MonomialBasis(region));
    map.emplace(key, basis);
    return basis;
}

BasisElement MonomialBasis::build_element(std::size_t index) const {
    const int n = region_.ambient();
    const auto& modes = region_.indices();
    const std::size_t m = modes.size();

    BasisElement out;
    out.kinds.resize(m);
    for (std::size_t j = 0; j < m; ++j) out.kinds[j] = static_cast<std::uint8_t>((index >> (2 * j)) & 3);

    // Per-site local matrices: each odd factor contributes a sigma_z string on all
    // lower sites; composing locals in increasing site order reproduces the
    // left-to-right operator product.
    std::vector<Local> locals(static_cast<std::size_t>(n), kIdentity);
    for (std::size_t j = 0; j < m; ++j) {
        const std::uint8_t kind = out.kinds[j];
        if (kind == 0) continue;
        const int site = modes[j];
        if (kind_is_odd(kind)) {
            for (int lower = 1; lower < site; ++lower) {
                locals[static_cast<std::size_t>(lower - 1)] =
                    mul(locals[static_cast<std::size_t>(lower - 1)], kSigmaZ);
            }
        }
        locals[static_cast<std::size_t>(site - 1)] =
            mul(locals[static_cast<std::size_t>(site - 1)], local_for_kind(kind));
    }

    // Kronecker expansion over sites, site 1 in the most significant position.
    std::vector<SparseEntry> acc{{0, 0, Complex(1.0, 0.0)}};
    std::vector<SparseEntry> next;
    for (int site = 1; site <= n; ++site) {
        const Local& loc = locals[static_cast<std::size_t>(site - 1)];
        next.clear();
        next.reserve(acc.size() * 2);
        for (const auto& e : acc) {
            for (int lr = 0; lr < 2; ++lr) {
                for (int lc = 0; lc < 2; ++lc) {
                    const Complex v = loc[static_cast<std::size_t>(2 * lr + lc)];
                    if (v == Complex(0.0, 0.0)) continue;
                    next.push_back({(e.row << 1) | lr, (e.col << 1) | lc, e.value * v});
                }
            }
        }
        acc.swap(next);
    }
    out.entries = std::move(acc);
    return out;
}

void MonomialBasis::for_each(const std::function<void(std::size_t, const BasisElement&)>& fn) const {
    if (materialized_) {
        for (std::size_t k = 0; k < elements_.size(); ++k) fn(k, elements_[k]);
    } else {
        for (std::size_t k = 0; k < size(); ++k) {
            BasisElement element = build_element(k);
            fn(k, element);
        }
    }
}

Eigen::VectorXcd MonomialBasis::coefficients(const CarOperator& x) const {
    if (x.ambient() != ambient()) throw std::invalid_argument("MonomialBasis::coefficients: ambient mismatch");
    const double dim = static_cast<double>(x.dim());
    Eigen::VectorXcd coeffs(static_cast<Eigen::Index>(size()));
    const Matrix& mat = x.matrix();
    for_each([&](std::size_t k, const BasisElement& element) {
        Complex acc(0.0, 0.0);
        for (const auto& e : element.entries) acc += std::conj(e.value) * mat(e.row, e.col);
        coeffs(static_cast<Eigen::Index>(k)) = acc / dim;
    });
    return coeffs;
}

CarOperator MonomialBasis::assemble(const Eigen::VectorXcd& coeffs) const {
    if (coeffs.size() != static_cast<Eigen::Index>(size())) {
        throw std::invalid_argument("MonomialBasis::assemble: coefficient count mismatch");
    }
    const Eigen::Index dim = Eigen::Index(1) << ambient();
    Matrix out = Matrix::Zero(dim, dim);
    for_each([&](std::size_t k, const BasisElement& element) {
        const Complex c = coeffs(static_cast<Eigen::Index>(k));
        if (c == Complex(0.0, 0.0)) return;
        for (const auto& e : element.entries) out(e.row, e.col) += c * e.value;
    });
    return CarOperator(ambient(), std::move(out));
}

CarOperator project_onto(const CarOperator& x, const ModeSet& region) {
    if (x.ambient() != region.ambient()) throw std::invalid_argument("project_onto: ambient mismatch");
    if (region.size() == region.ambient()) return x;
    auto basis = MonomialBasis::get(region);
    const double dim = static_cast<double>(x.dim());
    Matrix out = Matrix::Zero(x.dim(), x.dim());
    const Matrix& mat = x.matrix();
    basis->for_each([&](std::size_t, const BasisElement& element) {
        Complex c(0.0, 0.0);
        for (const auto& e : element.entries) c += std::conj(e.value) * mat(e.row, e.col);
        c /= dim;
        if (c == Complex(0.0, 0.0)) return;
        for (const auto& e : element.entries) out(e.row, e.col) += c * e.value;
    });
    return CarOperator(x.ambient(), std::move(out));
}

double membership_residual(const CarOperator& x, const ModeSet& region) {
    return (x - project_onto(x, region)).hs_norm();
}

CarOperator conditional_expectation(const CarOperator& x, const ModeSet& outer, const ModeSet& inner,
                                    double membership_tol) {
    if (!inner.subset_of(outer)) {
        throw std::invalid_argument("conditional_expectation: target region is not contained in the source");
    }
    if (x.ambient() != outer.ambient()) throw std::invalid_argument("conditional_expectation: ambient mismatch");
    const double residual = membership_residual(x, outer);
    if (residual > membership_tol) {
        throw std::invalid_argument("conditional_expectation: operand lies outside the source algebra (residual " +
                                    std::to_string(residual) + ")");
    }
    return project_onto(x, inner);
}

CarOperator f1(const ModeSet& outer, const ModeSet& inner, const CarOperator& x) {
    if (!inner.subset_of(outer)) throw std::invalid_argument("f1: target region is not contained in the source");
    if (x.ambient() != outer.ambient()) throw std::invalid_argument("f1: ambient mismatch");
    return 0.5 * (x + theta(outer.minus(inner), x));
}

CarOperator f2_after_f1(const ModeSet& outer, const ModeSet& inner, const CarOperator& x) {
    CarOperator w = f1(outer, inner, x);
    const Eigen::Index dim = w.dim();
    const double dimd = static_cast<double>(dim);

    auto inner_basis = MonomialBasis::get(inner);
    auto rest_basis = MonomialBasis::get(outer.minus(inner));

    Matrix out = Matrix::Zero(dim, dim);
    inner_basis->for_each([&](std::size_t, const BasisElement& u_elem) {
        Matrix u = u_elem.dense(dim);
        rest_basis->for_each([&](std::size_t, const BasisElement& v_elem) {
            // F2's domain is spanned by A(inner) times the even part of the rest.
            if (v_elem.parity() == Parity::Odd) return;
            Matrix v = v_elem.dense(dim);
            Matrix pair = u * v;
            const Complex c = pair.conjugate().cwiseProduct(w.matrix()).sum() / dimd;
            const Complex tau_v = v.trace() / dimd;
            out += (c * tau_v) * u;
        });
    });
    return CarOperator(w.ambient(), std::move(out));
}

Matrix compress(const CarOperator& x, const ModeSet& region) {
    if (x.ambient() != region.ambient()) throw std::invalid_argument("compress: ambient mismatch");
    if (region.size() == region.ambient()) return x.matrix();
    if (region.empty()) {
        Matrix out(1, 1);
        out(0, 0) = tau(x);
        return out;
    }
    const int m = region.size();
    Eigen::VectorXcd coeffs = MonomialBasis::get(region)->coefficients(x);
    auto target = MonomialBasis::get(ModeSet::full(m));
    return target->assemble(coeffs).matrix();
}

CarOperator embed(const Matrix& compressed, const ModeSet& region, int ambient) {
    if (region.ambient() != ambient) throw std::invalid_argument("embed: region ambient mismatch");
    const int m = region.size();
    const Eigen::Index want = Eigen::Index(1) << m;
    if (compressed.rows() != want || compressed.cols() != want) {
        throw std::invalid_argument("embed: compressed matrix has the wrong dimension");
    }
    if (m == ambient) return CarOperator(ambient, compressed);
    if (m == 0) {
        return compressed(0, 0) * CarOperator::identity(ambient);
    }
    Eigen::VectorXcd coeffs = MonomialBasis::get(ModeSet::full(m))->coefficients(CarOperator(m, compressed));
    return MonomialBasis::get(region)->assemble(coeffs);
}

StateDensity restrict_state(const StateDensity& state, const ModeSet& target) {
    if (!target.subset_of(state.region())) {
        throw std::invalid_argument("restrict_state: target is not contained in the state's region");
    }
    if (target == state.region()) return state;
    return StateDensity(project_onto(state.op(), target), target);
}

} // namespace car
