#include "car/monomial.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace car {

Parity factor_parity(FactorKind kind) {
    switch (kind) {
        case FactorKind::Annihilate:
        case FactorKind::Create:
            return Parity::Odd;
        case FactorKind::Hole:
        case FactorKind::Occupation:
            return Parity::Even;
    }
    throw std::logic_error("factor_parity: invalid kind");
}

int graded_sign(Parity a, Parity b) {
    return (a == Parity::Odd && b == Parity::Odd) ? -1 : 1;
}

Monomial::Monomial(std::vector<MonomialFactor> factors) : factors_(std::move(factors)) {
    int prev = 0;
    for (const auto& f : factors_) {
        if (f.mode < 1) throw std::invalid_argument("Monomial: mode indices start at 1");
        if (f.mode <= prev) {
            throw std::invalid_argument("Monomial: modes must be strictly increasing, got " +
                                        std::to_string(f.mode) + " after " + std::to_string(prev));
        }
        prev = f.mode;
    }
}

Monomial Monomial::parse(std::string_view text) {
    std::vector<MonomialFactor> factors;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos >= text.size()) break;
        std::size_t end = pos;
        while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
        std::string_view tok = text.substr(pos, end - pos);
        pos = end;

        char letter = tok.front();
        FactorKind kind;
        bool starred = tok.back() == '*';
        std::string_view digits = tok.substr(1, tok.size() - 1 - (starred ? 1 : 0));
        switch (letter) {
            case 'a': kind = starred ? FactorKind::Create : FactorKind::Annihilate; break;
            case 'n': kind = FactorKind::Occupation; break;
            case 'h': kind = FactorKind::Hole; break;
            default:
                throw std::invalid_argument("Monomial: unknown factor token '" + std::string(tok) + "'");
        }
        if (starred && letter != 'a') {
            throw std::invalid_argument("Monomial: '*' only applies to a-tokens, got '" + std::string(tok) + "'");
        }
        int mode = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), mode);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || mode < 1) {
            throw std::invalid_argument("Monomial: bad mode index in token '" + std::string(tok) + "'");
        }
        factors.push_back({mode, kind});
    }
    return Monomial(std::move(factors));
}

Parity Monomial::parity() const {
    return (odd_factor_count() % 2 == 0) ? Parity::Even : Parity::Odd;
}

int Monomial::odd_factor_count() const {
    int count = 0;
    for (const auto& f : factors_) {
        if (factor_parity(f.kind) == Parity::Odd) ++count;
    }
    return count;
}

int Monomial::max_mode() const { return factors_.empty() ? 0 : factors_.back().mode; }

ModeSet Monomial::support(int ambient) const {
    std::vector<int> modes;
    modes.reserve(factors_.size());
    for (const auto& f : factors_) modes.push_back(f.mode);
    return ModeSet(ambient, std::move(modes));
}

Monomial Monomial::adjoint() const {
    std::vector<MonomialFactor> out = factors_;
    for (auto& f : out) {
        if (f.kind == FactorKind::Annihilate) f.kind = FactorKind::Create;
        else if (f.kind == FactorKind::Create) f.kind = FactorKind::Annihilate;
    }
    return Monomial(std::move(out));
}

std::string Monomial::str() const {
    std::string out;
    for (const auto& f : factors_) {
        if (!out.empty()) out += ' ';
        switch (f.kind) {
            case FactorKind::Annihilate: out += 'a' + std::to_string(f.mode); break;
            case FactorKind::Create: out += 'a' + std::to_string(f.mode) + '*'; break;
            case FactorKind::Occupation: out += 'n' + std::to_string(f.mode); break;
            case FactorKind::Hole: out += 'h' + std::to_string(f.mode); break;
        }
    }
    return out;
}

} // namespace car
