#ifndef REGEN_REGION_HPP
#define REGEN_REGION_HPP

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "regen/rational.hpp"

namespace regen {

// a*alpha_bar + b*beta_bar >= c
struct HalfSpace {
    Rat a, b, c;
    bool operator==(const HalfSpace&) const = default;
};

struct Region2D {
    std::vector<HalfSpace> halfspaces;
    bool operator==(const Region2D&) const = default;
};

struct Point2 {
    Rat x, y;
    bool operator==(const Point2&) const = default;
};

inline Region2D cutset_region() {
    return {{{make_rat(3), make_rat(0), make_rat(1)},
             {make_rat(2), make_rat(1), make_rat(1)},
             {make_rat(1), make_rat(3), make_rat(1)},
             {make_rat(0), make_rat(6), make_rat(1)}}};
}

inline Region2D exact_region() {
    return {{{make_rat(3), make_rat(0), make_rat(1)},
             {make_rat(2), make_rat(1), make_rat(1)},
             {make_rat(4), make_rat(6), make_rat(3)},
             {make_rat(0), make_rat(6), make_rat(1)}}};
}

// sum_{i=0..2} min(alpha_bar, (3-i)*beta_bar), the storage/bandwidth
// mincut over one 3-helper reconstruction.
inline Rat cutset_bound_value(const Point2& p) {
    if (p.x < 0 || p.y < 0) throw std::invalid_argument("cutset bound needs a nonnegative point");
    Rat total = 0;
    for (int i = 0; i < 3; ++i) {
        Rat cut = make_rat(3 - i) * p.y;
        total += std::min(p.x, cut);
    }
    return total;
}

inline bool contains(const Region2D& region, const Point2& p) {
    for (const auto& h : region.halfspaces)
        if (h.a * p.x + h.b * p.y < h.c) return false;
    return true;
}

// Pairwise boundary intersections filtered by membership; the region is
// upward closed so these are exactly the lower-envelope corners.
inline std::vector<Point2> vertices(const Region2D& region) {
    const auto& hs = region.halfspaces;
    if (hs.size() < 2)
        throw std::invalid_argument("degenerate region: fewer than two half-spaces");
    std::vector<Point2> out;
    for (size_t i = 0; i < hs.size(); ++i) {
        for (size_t j = i + 1; j < hs.size(); ++j) {
            Rat det = hs[i].a * hs[j].b - hs[j].a * hs[i].b;
            if (det == 0) continue;
            Point2 p{(hs[i].c * hs[j].b - hs[j].c * hs[i].b) / det,
                     (hs[i].a * hs[j].c - hs[j].a * hs[i].c) / det};
            if (!contains(region, p)) continue;
            if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
        }
    }
    if (out.empty())
        throw std::invalid_argument("degenerate region: no boundary vertices");
    std::sort(out.begin(), out.end(), [](const Point2& l, const Point2& r) {
        return l.x != r.x ? l.x < r.x : l.y < r.y;
    });
    return out;
}

struct GapResult {
    Point2 witness;
    Rat gap;            // raw violation / (a + b)
    Rat raw_violation;  // c - a*x - b*y of the most violated inner constraint
    HalfSpace violated;
};

// Largest normalized violation of the inner region's constraints over
// the outer region's vertices; zero when the inner region contains all
// of them.
inline GapResult max_gap(const Region2D& outer, const Region2D& inner) {
    if (inner.halfspaces.empty())
        throw std::invalid_argument("inner region has no constraints");
    auto outer_vertices = vertices(outer);
    GapResult best{outer_vertices.front(), make_rat(0), make_rat(0), inner.halfspaces.front()};
    for (const auto& v : outer_vertices) {
        for (const auto& h : inner.halfspaces) {
            Rat raw = h.c - h.a * v.x - h.b * v.y;
            if (raw <= 0) continue;
            Rat norm = h.a + h.b;
            if (norm <= 0) throw std::domain_error("gap normalization needs a + b > 0");
            Rat gap = raw / norm;
            if (gap > best.gap) best = {v, gap, raw, h};
        }
    }
    return best;
}

inline std::string export_halfspaces_csv(const Region2D& region) {
    if (region.halfspaces.empty())
        throw std::invalid_argument("refusing to export an empty constraint list");
    std::string out = "a,b,c\n";
    for (const auto& h : region.halfspaces)
        out += format_rat(h.a) + "," + format_rat(h.b) + "," + format_rat(h.c) + "\n";
    return out;
}

inline std::string export_vertices_csv(const Region2D& region) {
    std::string out = "alpha_bar,beta_bar\n";
    for (const auto& v : vertices(region))
        out += format_rat(v.x) + "," + format_rat(v.y) + "\n";
    return out;
}

inline std::string export_region(const Region2D& region, const std::string& format) {
    if (format == "halfspaces") return export_halfspaces_csv(region);
    if (format == "vertices") return export_vertices_csv(region);
    throw std::invalid_argument("unknown region export format: " + format);
}

namespace detail {
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                       const std::string& header, size_t fields) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw std::invalid_argument("bad csv header, expected: " + header);
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        if (row.size() != fields)
            throw std::invalid_argument("bad csv row: " + line);
        rows.push_back(std::move(row));
    }
    return rows;
}
}  // namespace detail

inline Region2D parse_halfspaces_csv(const std::string& text) {
    Region2D region;
    for (const auto& row : detail::parse_csv(text, "a,b,c", 3)) {
        HalfSpace h{parse_rat(row[0]), parse_rat(row[1]), parse_rat(row[2])};
        if (h.a == 0 && h.b == 0)
            throw std::invalid_argument("half-space with zero normal");
        region.halfspaces.push_back(h);
    }
    if (region.halfspaces.empty())
        throw std::invalid_argument("empty half-space csv");
    return region;
}

inline std::vector<Point2> parse_vertices_csv(const std::string& text) {
    std::vector<Point2> out;
    for (const auto& row : detail::parse_csv(text, "alpha_bar,beta_bar", 2))
        out.push_back({parse_rat(row[0]), parse_rat(row[1])});
    return out;
}

}  // namespace regen

#endif
