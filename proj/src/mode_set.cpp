#include "car/mode_set.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace car {

namespace {

void check_ambient(int ambient) {
    if (ambient < 1 || ambient > 31) {
        throw std::invalid_argument("ModeSet: ambient mode count must be in [1, 31], got " +
                                    std::to_string(ambient));
    }
}

} // namespace

ModeSet::ModeSet(int ambient) : ambient_(ambient) { check_ambient(ambient); }

ModeSet::ModeSet(int ambient, std::vector<int> indices) : ambient_(ambient), indices_(std::move(indices)) {
    check_ambient(ambient);
    std::sort(indices_.begin(), indices_.end());
    indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
    for (int i : indices_) {
        if (i < 1 || i > ambient_) {
            throw std::invalid_argument("ModeSet: index " + std::to_string(i) + " outside [1, " +
                                        std::to_string(ambient_) + "]");
        }
    }
}

ModeSet ModeSet::full(int ambient) {
    std::vector<int> all(static_cast<std::size_t>(ambient));
    for (int i = 0; i < ambient; ++i) all[static_cast<std::size_t>(i)] = i + 1;
    return ModeSet(ambient, std::move(all));
}

ModeSet ModeSet::parse(int ambient, std::string_view text) {
    std::vector<int> indices;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string_view tok = text.substr(pos, comma == std::string_view::npos ? comma : comma - pos);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        if (!tok.empty()) {
            int value = 0;
            auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
            if (ec != std::errc() || ptr != tok.data() + tok.size()) {
                throw std::invalid_argument("ModeSet: cannot parse index '" + std::string(tok) + "'");
            }
            indices.push_back(value);
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return ModeSet(ambient, std::move(indices));
}

bool ModeSet::contains(int mode) const {
    return std::binary_search(indices_.begin(), indices_.end(), mode);
}

bool ModeSet::subset_of(const ModeSet& other) const {
    if (ambient_ != other.ambient_) throw std::invalid_argument("ModeSet: ambient mismatch");
    return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(), indices_.end());
}

ModeSet ModeSet::unite(const ModeSet& other) const {
    if (ambient_ != other.ambient_) throw std::invalid_argument("ModeSet: ambient mismatch");
    std::vector<int> out;
    std::set_union(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                   std::back_inserter(out));
    return ModeSet(ambient_, std::move(out));
}

ModeSet ModeSet::intersect(const ModeSet& other) const {
    if (ambient_ != other.ambient_) throw std::invalid_argument("ModeSet: ambient mismatch");
    std::vector<int> out;
    std::set_intersection(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                          std::back_inserter(out));
    return ModeSet(ambient_, std::move(out));
}

ModeSet ModeSet::minus(const ModeSet& other) const {
    if (ambient_ != other.ambient_) throw std::invalid_argument("ModeSet: ambient mismatch");
    std::vector<int> out;
    std::set_difference(indices_.begin(), indices_.end(), other.indices_.begin(), other.indices_.end(),
                        std::back_inserter(out));
    return ModeSet(ambient_, std::move(out));
}

ModeSet ModeSet::complement() const { return ModeSet::full(ambient_).minus(*this); }

std::uint32_t ModeSet::mask() const {
    std::uint32_t m = 0;
    for (int i : indices_) m |= (1u << (i - 1));
    return m;
}

std::string ModeSet::str() const {
    std::string out;
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        if (k) out += ',';
        out += std::to_string(indices_[k]);
    }
    return out;
}

RegionPair::RegionPair(ModeSet i, ModeSet j) : I(std::move(i)), J(std::move(j)) {
    if (I.ambient() != J.ambient()) throw std::invalid_argument("RegionPair: ambient mismatch");
}

} // namespace car
