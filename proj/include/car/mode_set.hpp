#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace car {

/// Sorted set of mode indices drawn from the ambient range [1, n].
class ModeSet {
public:
    explicit ModeSet(int ambient);
    ModeSet(int ambient, std::vector<int> indices);

    static ModeSet full(int ambient);
    static ModeSet parse(int ambient, std::string_view text);

    int ambient() const { return ambient_; }
    int size() const { return static_cast<int>(indices_.size()); }
    bool empty() const { return indices_.empty(); }
    bool contains(int mode) const;
    const std::vector<int>& indices() const { return indices_; }

    bool subset_of(const ModeSet& other) const;
    ModeSet unite(const ModeSet& other) const;
    ModeSet intersect(const ModeSet& other) const;
    ModeSet minus(const ModeSet& other) const;
    ModeSet complement() const;

    /// Bit i-1 set iff mode i is present.
    std::uint32_t mask() const;

    /// Comma-separated indices; empty string for the empty set.
    std::string str() const;

    bool operator==(const ModeSet& other) const = default;

private:
    int ambient_;
    std::vector<int> indices_;
};

/// Regions I and J of one ambient algebra together with the derived sets.
struct RegionPair {
    RegionPair(ModeSet i, ModeSet j);

    ModeSet I;
    ModeSet J;

    int ambient() const { return I.ambient(); }
    ModeSet union_set() const { return I.unite(J); }
    ModeSet intersection() const { return I.intersect(J); }
    ModeSet i_minus_j() const { return I.minus(J); }
    ModeSet j_minus_i() const { return J.minus(I); }
};

} // namespace car
