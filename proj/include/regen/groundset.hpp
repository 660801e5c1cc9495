#ifndef REGEN_GROUNDSET_HPP
#define REGEN_GROUNDSET_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace regen {

// Ground set of the converse LP: 16 variables, bit-indexed as
//   0..3   W1..W4
//   4..15  S12,S13,S14,S21,S23,S24,S31,S32,S34,S41,S42,S43
// (Sij = repair contribution of node i toward node j, (i,j) lex order).
inline constexpr int kGroundVarCount = 16;
inline constexpr std::uint32_t kFullSet = 0xFFFFu;

inline int w_index(int i) {
    if (i < 1 || i > 4) throw std::invalid_argument("node index out of range");
    return i - 1;
}

inline int s_index(int i, int j) {
    if (i < 1 || i > 4 || j < 1 || j > 4 || i == j)
        throw std::invalid_argument("bad repair pair");
    return 4 + 3 * (i - 1) + (j - 1) - (j > i ? 1 : 0);
}

inline std::string var_name(int v) {
    if (v < 0 || v >= kGroundVarCount) throw std::invalid_argument("variable index out of range");
    if (v < 4) return "W" + std::to_string(v + 1);
    int i = (v - 4) / 3 + 1;
    int r = (v - 4) % 3;
    int j = r + 1 + (r + 1 >= i ? 1 : 0);
    return "S" + std::to_string(i) + std::to_string(j);
}

inline std::optional<int> parse_var_name(const std::string& s) {
    if (s.size() == 2 && s[0] == 'W' && s[1] >= '1' && s[1] <= '4') return s[1] - '1';
    if (s.size() == 3 && s[0] == 'S' && s[1] >= '1' && s[1] <= '4' && s[2] >= '1' && s[2] <= '4' &&
        s[1] != s[2])
        return s_index(s[1] - '0', s[2] - '0');
    return std::nullopt;
}

inline std::vector<int> set_members(std::uint32_t mask) {
    std::vector<int> out;
    for (int v = 0; v < kGroundVarCount; ++v)
        if (mask & (1u << v)) out.push_back(v);
    return out;
}

inline std::string render_set(std::uint32_t mask) {
    std::string out;
    for (int v : set_members(mask)) {
        if (!out.empty()) out += "+";
        out += var_name(v);
    }
    return out;
}

struct NodePermutation {
    std::array<int, 4> image;  // image[i-1] = pi(i)
    bool operator==(const NodePermutation&) const = default;
};

inline std::vector<NodePermutation> symmetry_group() {
    std::vector<NodePermutation> group;
    std::array<int, 4> ids{1, 2, 3, 4};
    do {
        group.push_back({ids});
    } while (std::next_permutation(ids.begin(), ids.end()));
    return group;
}

inline NodePermutation compose(const NodePermutation& f, const NodePermutation& g) {
    // (f . g)(i) = f(g(i))
    NodePermutation out{};
    for (int i = 1; i <= 4; ++i)
        out.image[static_cast<size_t>(i - 1)] =
            f.image[static_cast<size_t>(g.image[static_cast<size_t>(i - 1)] - 1)];
    return out;
}

inline int apply_perm_var(const NodePermutation& p, int v) {
    if (v < 4) return w_index(p.image[static_cast<size_t>(v)]);
    int i = (v - 4) / 3 + 1;
    int r = (v - 4) % 3;
    int j = r + 1 + (r + 1 >= i ? 1 : 0);
    return s_index(p.image[static_cast<size_t>(i - 1)], p.image[static_cast<size_t>(j - 1)]);
}

inline std::uint32_t apply_perm_mask(const NodePermutation& p, std::uint32_t mask) {
    std::uint32_t out = 0;
    for (int v = 0; v < kGroundVarCount; ++v)
        if (mask & (1u << v)) out |= 1u << apply_perm_var(p, v);
    return out;
}

// Subsets ordered as sorted member lists. Let p be the smallest
// element where the sets differ; everything below p is shared, so the
// lists agree up to that position and the comparison is decided by p's
// owner continuing with p while the other list continues with some
// element above p (or ends, making it a proper prefix).
inline bool set_lex_less(std::uint32_t a, std::uint32_t b) {
    std::uint32_t d = a ^ b;
    if (d == 0) return false;
    int p = std::countr_zero(d);
    if ((a >> p) & 1u) return (b >> (p + 1)) != 0;
    return (a >> (p + 1)) == 0;
}

struct CanonicalSet {
    std::uint32_t representative = 0;
    int orbit_size = 0;
    bool is_full_rank_B = false;
    bool operator==(const CanonicalSet&) const = default;
};

namespace detail {

struct GroundTables {
    std::vector<NodePermutation> group;
    std::vector<std::uint16_t> perm_mask;  // [perm][mask]
    std::vector<std::uint16_t> closure;    // [mask]
    std::vector<std::uint16_t> canon;      // [mask] min orbit image of closure
    std::vector<std::uint16_t> reps;       // distinct canon over nonempty masks, sorted
    std::vector<int> rep_orbit_size;
    std::vector<int> coord_of;             // [mask] index into reps
    int closed_set_count = 0;

    std::uint16_t pm(size_t perm, std::uint32_t mask) const {
        return perm_mask[(perm << 16) | mask];
    }
};

inline GroundTables build_ground_tables() {
    GroundTables t;
    t.group = symmetry_group();
    t.perm_mask.assign(24ull << 16, 0);
    for (size_t p = 0; p < t.group.size(); ++p) {
        std::array<std::uint16_t, 16> bit_image{};
        for (int v = 0; v < kGroundVarCount; ++v)
            bit_image[static_cast<size_t>(v)] =
                static_cast<std::uint16_t>(1u << apply_perm_var(t.group[p], v));
        for (std::uint32_t m = 0; m <= kFullSet; ++m) {
            std::uint32_t img = 0;
            std::uint32_t rest = m;
            while (rest) {
                int v = std::countr_zero(rest);
                rest &= rest - 1;
                img |= bit_image[static_cast<size_t>(v)];
            }
            t.perm_mask[(p << 16) | m] = static_cast<std::uint16_t>(img);
        }
    }

    std::array<std::uint32_t, 4> row_mask{}, col_mask{};
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j)
            if (i != j) {
                row_mask[static_cast<size_t>(i - 1)] |= 1u << s_index(i, j);
                col_mask[static_cast<size_t>(j - 1)] |= 1u << s_index(i, j);
            }
    t.closure.assign(1u << 16, 0);
    for (std::uint32_t m = 0; m <= kFullSet; ++m) {
        std::uint32_t x = m;
        for (;;) {
            std::uint32_t before = x;
            for (int i = 0; i < 4; ++i)
                if (x & (1u << i)) x |= row_mask[static_cast<size_t>(i)];
            for (int j = 0; j < 4; ++j)
                if ((x & col_mask[static_cast<size_t>(j)]) == col_mask[static_cast<size_t>(j)])
                    x |= 1u << j;
            if (x == before) break;
        }
        t.closure[m] = static_cast<std::uint16_t>(x);
    }

    t.canon.assign(1u << 16, 0);
    std::vector<bool> closed_seen(1u << 16, false), rep_seen(1u << 16, false);
    for (std::uint32_t m = 0; m <= kFullSet; ++m) {
        std::uint32_t c = t.closure[m];
        if (!closed_seen[c]) {
            closed_seen[c] = true;
            ++t.closed_set_count;
        }
        std::uint32_t best = t.pm(0, c);
        for (size_t p = 1; p < 24; ++p) {
            std::uint32_t img = t.pm(p, c);
            if (set_lex_less(img, best)) best = img;
        }
        t.canon[m] = static_cast<std::uint16_t>(best);
        if (m != 0 && !rep_seen[best]) {
            rep_seen[best] = true;
            t.reps.push_back(static_cast<std::uint16_t>(best));
        }
    }
    std::sort(t.reps.begin(), t.reps.end(), set_lex_less);
    t.coord_of.assign(1u << 16, -1);
    std::vector<int> index_of_rep(1u << 16, -1);
    for (size_t k = 0; k < t.reps.size(); ++k) index_of_rep[t.reps[k]] = static_cast<int>(k);
    for (std::uint32_t m = 1; m <= kFullSet; ++m) t.coord_of[m] = index_of_rep[t.canon[m]];
    t.rep_orbit_size.resize(t.reps.size());
    for (size_t k = 0; k < t.reps.size(); ++k) {
        std::vector<std::uint16_t> images;
        for (size_t p = 0; p < 24; ++p) images.push_back(t.pm(p, t.reps[k]));
        std::sort(images.begin(), images.end());
        images.erase(std::unique(images.begin(), images.end()), images.end());
        t.rep_orbit_size[k] = static_cast<int>(images.size());
    }
    return t;
}

inline const GroundTables& ground() {
    static const GroundTables t = build_ground_tables();
    return t;
}

}  // namespace detail

inline std::uint32_t dependency_closure_mask(std::uint32_t mask) {
    if (mask > kFullSet) throw std::invalid_argument("mask outside ground set");
    return detail::ground().closure[mask];
}

inline CanonicalSet canonicalize_mask(std::uint32_t mask) {
    if (mask == 0) throw std::invalid_argument("cannot canonicalize the empty set");
    if (mask > kFullSet) throw std::invalid_argument("mask outside ground set");
    const auto& t = detail::ground();
    int idx = t.coord_of[mask];
    std::uint32_t rep = t.reps[static_cast<size_t>(idx)];
    return {rep, t.rep_orbit_size[static_cast<size_t>(idx)],
            std::popcount(rep & 0xFu) >= 3};
}

// Index of the LP coordinate (canonical closed class) of a nonempty
// subset; coordinates are numbered in enumerate_coordinates order.
inline int coordinate_index(std::uint32_t mask) {
    if (mask == 0) throw std::invalid_argument("empty set has no coordinate");
    if (mask > kFullSet) throw std::invalid_argument("mask outside ground set");
    return detail::ground().coord_of[mask];
}

inline std::vector<CanonicalSet> enumerate_coordinates() {
    const auto& t = detail::ground();
    std::vector<CanonicalSet> out;
    out.reserve(t.reps.size());
    for (size_t k = 0; k < t.reps.size(); ++k)
        out.push_back({t.reps[k], t.rep_orbit_size[k], std::popcount(t.reps[k] & 0xFu) >= 3});
    return out;
}

inline int closed_set_count() { return detail::ground().closed_set_count; }

inline std::string export_coordinates_csv() {
    std::string out = "representative,orbit_size\n";
    for (const auto& c : enumerate_coordinates())
        out += render_set(c.representative) + "," + std::to_string(c.orbit_size) + "\n";
    return out;
}

}  // namespace regen

#endif
