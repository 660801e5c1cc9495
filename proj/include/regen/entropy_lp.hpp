#ifndef REGEN_ENTROPY_LP_HPP
#define REGEN_ENTROPY_LP_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "regen/groundset.hpp"
#include "regen/rational.hpp"
#include "regen/simplex.hpp"

namespace regen {

// One inequality of the outer-bound LP, written over canonical class
// coordinates plus the scalar symbols alpha, beta and the constant B:
//   sum terms[k].second * h(class terms[k].first)
//     + alpha_coeff*alpha + beta_coeff*beta + b_coeff*B  >= 0.
struct LinearInequality {
    std::string name;
    std::vector<std::pair<int, Rat>> terms;
    Rat alpha_coeff{0};
    Rat beta_coeff{0};
    Rat b_coeff{0};
};

struct RefusedError : std::runtime_error {
    Rat optimum;
    explicit RefusedError(const Rat& opt)
        : std::runtime_error("requested constant exceeds the optimum " + format_rat(opt)),
          optimum(opt) {}
};

namespace detail {

// Reduces I(X_vi; X_vj | K) to class coordinates. Writes up to four
// (coordinate, coefficient) pairs sorted by coordinate; returns the
// count, 0 for a tautology.
inline int reduce_cmi(int vi, int vj, std::uint32_t kmask, std::array<int, 4>& coord,
                      std::array<int, 4>& coeff) {
    const auto& g = ground();
    int n = 0;
    auto add = [&](std::uint32_t m, int c) {
        if (m == 0) return;
        int idx = g.coord_of[m];
        for (int t = 0; t < n; ++t)
            if (coord[static_cast<size_t>(t)] == idx) {
                coeff[static_cast<size_t>(t)] += c;
                return;
            }
        coord[static_cast<size_t>(n)] = idx;
        coeff[static_cast<size_t>(n)] = c;
        ++n;
    };
    std::uint32_t bi = 1u << vi, bj = 1u << vj;
    add(kmask | bi, 1);
    add(kmask | bj, 1);
    add(kmask | bi | bj, -1);
    add(kmask, -1);
    std::array<std::pair<int, int>, 4> packed;
    int out = 0;
    for (int t = 0; t < n; ++t)
        if (coeff[static_cast<size_t>(t)] != 0)
            packed[static_cast<size_t>(out++)] = {coord[static_cast<size_t>(t)],
                                                  coeff[static_cast<size_t>(t)]};
    std::sort(packed.begin(), packed.begin() + out);
    for (int t = 0; t < out; ++t) {
        coord[static_cast<size_t>(t)] = packed[static_cast<size_t>(t)].first;
        coeff[static_cast<size_t>(t)] = packed[static_cast<size_t>(t)].second;
    }
    return out;
}

struct PoolRow {
    std::array<std::uint8_t, 4> coord{};
    std::array<std::int8_t, 4> coeff{};
    std::uint8_t size = 0;
    std::uint8_t gi = 0, gj = 0;  // first generating pair (ground var indices)
    std::uint16_t gk = 0;         // its conditioning mask
    bool near = false;            // reachable from a |K| <= 1 generator
};

struct Pool {
    std::vector<PoolRow> rows;
    int class_count = 0;
    int idx_full = -1;
    int idx_w = -1;
    int idx_s = -1;
    int near_count = 0;
};

inline std::uint64_t pack_terms(const std::array<int, 4>& coord, const std::array<int, 4>& coeff,
                                int n) {
    std::uint64_t key = 1;
    for (int t = 0; t < n; ++t)
        key = (key << 11) |
              static_cast<std::uint64_t>((coord[static_cast<size_t>(t)] << 3) +
                                         coeff[static_cast<size_t>(t)] + 3);
    return key;
}

inline int thread_budget() {
    if (const char* env = std::getenv("REGEN_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(std::min(v, 64L));
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(std::min(hw, 64u));
}

inline Pool build_pool() {
    Pool p;
    p.class_count = static_cast<int>(ground().reps.size());
    p.idx_full = coordinate_index(kFullSet);
    p.idx_w = coordinate_index(1u << w_index(1));
    p.idx_s = coordinate_index(1u << s_index(1, 2));

    struct Cand {
        std::uint64_t key;
        PoolRow row;
    };
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < kGroundVarCount; ++i)
        for (int j = i + 1; j < kGroundVarCount; ++j) pairs.emplace_back(i, j);

    std::vector<std::vector<Cand>> per_pair(pairs.size());
    auto worker = [&](size_t begin, size_t end) {
        std::array<int, 4> coord{}, coeff{};
        for (size_t pi = begin; pi < end; ++pi) {
            auto [vi, vj] = pairs[pi];
            std::uint32_t forbidden = (1u << vi) | (1u << vj);
            std::unordered_map<std::uint64_t, size_t> local;
            auto& out = per_pair[pi];
            for (std::uint32_t k = 0; k <= kFullSet; ++k) {
                if (k & forbidden) continue;
                int n = reduce_cmi(vi, vj, k, coord, coeff);
                if (n == 0) continue;
                std::uint64_t key = pack_terms(coord, coeff, n);
                bool near = std::popcount(k) <= 1;
                auto it = local.find(key);
                if (it != local.end()) {
                    if (near) out[it->second].row.near = true;
                    continue;
                }
                local.emplace(key, out.size());
                PoolRow row;
                row.size = static_cast<std::uint8_t>(n);
                for (int t = 0; t < n; ++t) {
                    row.coord[static_cast<size_t>(t)] =
                        static_cast<std::uint8_t>(coord[static_cast<size_t>(t)]);
                    row.coeff[static_cast<size_t>(t)] =
                        static_cast<std::int8_t>(coeff[static_cast<size_t>(t)]);
                }
                row.gi = static_cast<std::uint8_t>(vi);
                row.gj = static_cast<std::uint8_t>(vj);
                row.gk = static_cast<std::uint16_t>(k);
                row.near = near;
                out.push_back({key, row});
            }
        }
    };

    int threads = thread_budget();
    if (threads <= 1) {
        worker(0, pairs.size());
    } else {
        std::vector<std::thread> crew;
        size_t chunk = (pairs.size() + static_cast<size_t>(threads) - 1) / static_cast<size_t>(threads);
        for (int t = 0; t < threads; ++t) {
            size_t begin = static_cast<size_t>(t) * chunk;
            if (begin >= pairs.size()) break;
            size_t end = std::min(pairs.size(), begin + chunk);
            crew.emplace_back(worker, begin, end);
        }
        for (auto& th : crew) th.join();
    }

    // Merge in the canonical single-thread order: pairs lexicographic,
    // conditioning masks ascending, first generator names the row.
    std::unordered_map<std::uint64_t, size_t> global;
    global.reserve(1u << 18);
    for (const auto& bucket : per_pair)
        for (const auto& cand : bucket) {
            auto it = global.find(cand.key);
            if (it != global.end()) {
                if (cand.row.near) p.rows[it->second].near = true;
                continue;
            }
            global.emplace(cand.key, p.rows.size());
            p.rows.push_back(cand.row);
        }
    for (const auto& row : p.rows) p.near_count += row.near ? 1 : 0;
    return p;
}

inline const Pool& pool() {
    static const Pool p = build_pool();
    return p;
}

}  // namespace detail

inline size_t elemental_inequality_count() { return detail::pool().rows.size(); }
inline size_t elemental_seed_count() { return static_cast<size_t>(detail::pool().near_count); }

inline std::string elemental_name(int vi, int vj, std::uint32_t kmask) {
    std::string s = "elem:I(" + var_name(vi) + ";" + var_name(vj);
    if (kmask) {
        s += "|";
        bool first = true;
        for (int v : set_members(kmask)) {
            if (!first) s += ",";
            s += var_name(v);
            first = false;
        }
    }
    return s + ")";
}

inline LinearInequality elemental_inequality(size_t idx) {
    const auto& p = detail::pool();
    if (idx >= p.rows.size()) throw std::invalid_argument("elemental index out of range");
    const auto& row = p.rows[idx];
    LinearInequality q;
    q.name = elemental_name(row.gi, row.gj, row.gk);
    for (int t = 0; t < row.size; ++t)
        q.terms.emplace_back(row.coord[static_cast<size_t>(t)],
                             Rat(row.coeff[static_cast<size_t>(t)]));
    return q;
}

inline std::vector<LinearInequality> elemental_inequalities() {
    std::vector<LinearInequality> out;
    out.reserve(elemental_inequality_count());
    for (size_t i = 0; i < elemental_inequality_count(); ++i) out.push_back(elemental_inequality(i));
    return out;
}

inline LinearInequality alpha_cap_inequality() {
    LinearInequality q;
    q.name = "prob:alpha-cap";
    q.terms.emplace_back(detail::pool().idx_w, Rat(-1));
    q.alpha_coeff = 1;
    return q;
}

inline LinearInequality beta_cap_inequality() {
    LinearInequality q;
    q.name = "prob:beta-cap";
    q.terms.emplace_back(detail::pool().idx_s, Rat(-1));
    q.beta_coeff = 1;
    return q;
}

inline LinearInequality b_norm_inequality() {
    LinearInequality q;
    q.name = "prob:B-norm";
    q.terms.emplace_back(detail::pool().idx_full, Rat(1));
    q.b_coeff = -1;
    return q;
}

inline std::vector<LinearInequality> problem_constraints() {
    return {alpha_cap_inequality(), beta_cap_inequality(), b_norm_inequality()};
}

// Rebuilds a named inequality from scratch; certificates are checked
// against these rows, not against anything the solver produced.
inline LinearInequality inequality_from_name(const std::string& name) {
    if (name == "prob:alpha-cap") return alpha_cap_inequality();
    if (name == "prob:beta-cap") return beta_cap_inequality();
    if (name == "prob:B-norm") return b_norm_inequality();
    auto parse_atom = [](const std::string& s) {
        auto v = parse_var_name(s);
        if (!v) throw std::invalid_argument("unknown ground variable " + s);
        return *v;
    };
    if (name.rfind("elem:H(", 0) == 0 && name.size() > 8 && name.back() == ')') {
        std::string body = name.substr(7, name.size() - 8);
        size_t bar = body.find('|');
        if (bar == std::string::npos || body.substr(bar + 1) != "rest")
            throw std::invalid_argument("unknown inequality name " + name);
        int v = parse_atom(body.substr(0, bar));
        LinearInequality q;
        q.name = name;
        int full = coordinate_index(kFullSet);
        int rest = coordinate_index(kFullSet & ~(1u << v));
        if (full != rest) {
            q.terms.emplace_back(std::min(full, rest), Rat(full < rest ? 1 : -1));
            q.terms.emplace_back(std::max(full, rest), Rat(full < rest ? -1 : 1));
        }
        return q;
    }
    if (name.rfind("elem:I(", 0) == 0 && name.back() == ')') {
        std::string body = name.substr(7, name.size() - 8);
        size_t semi = body.find(';');
        if (semi == std::string::npos) throw std::invalid_argument("unknown inequality name " + name);
        size_t bar = body.find('|', semi);
        int vi = parse_atom(body.substr(0, semi));
        int vj = parse_atom(body.substr(semi + 1, (bar == std::string::npos ? body.size() : bar) -
                                                      semi - 1));
        if (vi == vj) throw std::invalid_argument("degenerate pair in " + name);
        std::uint32_t kmask = 0;
        if (bar != std::string::npos) {
            std::string rest = body.substr(bar + 1);
            if (rest.empty()) throw std::invalid_argument("empty condition in " + name);
            size_t pos = 0;
            while (pos <= rest.size()) {
                size_t comma = rest.find(',', pos);
                std::string member =
                    rest.substr(pos, (comma == std::string::npos ? rest.size() : comma) - pos);
                int v = parse_atom(member);
                if ((kmask >> v) & 1u) throw std::invalid_argument("duplicate condition in " + name);
                kmask |= 1u << v;
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
        }
        if (kmask & ((1u << vi) | (1u << vj)))
            throw std::invalid_argument("condition overlaps pair in " + name);
        std::array<int, 4> coord{}, coeff{};
        int n = detail::reduce_cmi(vi, vj, kmask, coord, coeff);
        LinearInequality q;
        q.name = elemental_name(vi, vj, kmask);
        for (int t = 0; t < n; ++t)
            q.terms.emplace_back(coord[static_cast<size_t>(t)], Rat(coeff[static_cast<size_t>(t)]));
        return q;
    }
    throw std::invalid_argument("unknown inequality name " + name);
}

inline std::string render_inequality(const LinearInequality& q) {
    std::string out;
    bool first = true;
    auto emit = [&](const Rat& c, const std::string& atom) {
        if (sgn(c) == 0) return;
        Rat mag = abs(c);
        if (first) {
            out += (sgn(c) < 0 ? "- " : "") + format_rat(mag) + " " + atom;
            first = false;
        } else {
            out += (sgn(c) < 0 ? " - " : " + ") + format_rat(mag) + " " + atom;
        }
    };
    const auto& g = detail::ground();
    for (const auto& [idx, c] : q.terms)
        emit(c, "h(" + render_set(g.reps[static_cast<size_t>(idx)]) + ")");
    emit(q.alpha_coeff, "alpha");
    emit(q.beta_coeff, "beta");
    emit(q.b_coeff, "B");
    if (first) out += "0";
    return out + " >= 0";
}

struct CertificateLine {
    Rat weight;
    std::string name;
    std::string rendered;
};

// Proof of  a*alpha + b*beta - c*B >= 0  as a nonnegative combination
// of named inequalities.
struct ProofCertificate {
    Rat a{0}, b{0}, c{0};
    std::vector<CertificateLine> lines;
};

inline std::string render_certificate(const ProofCertificate& cert) {
    std::string out = "target: " + format_rat(cert.a) + " alpha + " + format_rat(cert.b) +
                      " beta - " + format_rat(cert.c) + " B >= 0\n";
    for (const auto& line : cert.lines)
        out += format_rat(line.weight) + "\t" + line.name + "\t" + line.rendered + "\n";
    return out;
}

inline ProofCertificate parse_certificate(const std::string& text) {
    std::vector<std::string> lines;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) {
            lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw std::runtime_error("certificate: empty file");

    auto split = [](const std::string& s, char sep) {
        std::vector<std::string> parts;
        size_t start = 0;
        for (size_t i = 0; i <= s.size(); ++i)
            if (i == s.size() || s[i] == sep) {
                parts.push_back(s.substr(start, i - start));
                start = i + 1;
            }
        return parts;
    };

    const std::string& head = lines[0];
    if (head.rfind("target: ", 0) != 0)
        throw std::runtime_error("certificate: missing target header");
    auto tok = split(head.substr(8), ' ');
    if (tok.size() != 10 || tok[1] != "alpha" || tok[2] != "+" || tok[4] != "beta" ||
        tok[5] != "-" || tok[7] != "B" || tok[8] != ">=" || tok[9] != "0")
        throw std::runtime_error("certificate: malformed target header");
    ProofCertificate cert;
    cert.a = parse_rat(tok[0]);
    cert.b = parse_rat(tok[3]);
    cert.c = parse_rat(tok[6]);

    for (size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto fields = split(lines[i], '\t');
        if (fields.size() != 3)
            throw std::runtime_error("certificate: line " + std::to_string(i + 1) +
                                     " is not weight<TAB>name<TAB>inequality");
        cert.lines.push_back({parse_rat(fields[0]), fields[1], fields[2]});
    }
    return cert;
}

struct VerifyResult {
    bool ok = false;
    std::string diagnostic;
};

inline VerifyResult verify_certificate(const ProofCertificate& cert) {
    const auto& g = detail::ground();
    std::vector<Rat> sum(g.reps.size(), Rat(0));
    Rat sum_alpha = 0, sum_beta = 0, sum_b = 0;
    for (const auto& line : cert.lines) {
        if (sgn(line.weight) < 0) return {false, "negative weight on " + line.name};
        LinearInequality q;
        try {
            q = inequality_from_name(line.name);
        } catch (const std::invalid_argument& e) {
            return {false, e.what()};
        }
        if (render_inequality(q) != line.rendered)
            return {false, "inequality text does not match its name: " + line.name};
        for (const auto& [idx, c] : q.terms) sum[static_cast<size_t>(idx)] += line.weight * c;
        sum_alpha += line.weight * q.alpha_coeff;
        sum_beta += line.weight * q.beta_coeff;
        sum_b += line.weight * q.b_coeff;
    }
    for (size_t i = 0; i < sum.size(); ++i)
        if (sgn(sum[i]) != 0)
            return {false, "residual " + format_rat(sum[i]) + " on h(" + render_set(g.reps[i]) + ")"};
    if (sum_alpha != cert.a) return {false, "alpha total " + format_rat(sum_alpha) + " does not match target"};
    if (sum_beta != cert.b) return {false, "beta total " + format_rat(sum_beta) + " does not match target"};
    if (sum_b != -cert.c) return {false, "B total " + format_rat(sum_b) + " does not match target"};
    return {true, ""};
}

namespace detail {

constexpr int kGenBatch = 32;
constexpr int kGenRoundLimit = 100000;

inline std::vector<Rat> pool_column(const PoolRow& row, int rows) {
    std::vector<Rat> col(static_cast<size_t>(rows), Rat(0));
    for (int t = 0; t < row.size; ++t)
        col[row.coord[static_cast<size_t>(t)]] = row.coeff[static_cast<size_t>(t)];
    return col;
}

// Adds violated pool rows (by h) as zero-cost columns, taking them in
// canonical pool order; structured low-order inequalities first keeps
// the walk short where magnitude-greedy pricing wanders. Returns the
// number added.
inline int add_violated_columns(lp::Simplex& s, const std::vector<Rat>& h, int rows,
                                std::vector<char>& added, std::vector<int>& col_pool) {
    const Pool& p = pool();
    int taken = 0;
    for (size_t i = 0; i < p.rows.size() && taken < kGenBatch; ++i) {
        if (added[i]) continue;
        const auto& row = p.rows[i];
        Rat v = 0;
        for (int t = 0; t < row.size; ++t)
            v += h[row.coord[static_cast<size_t>(t)]] * row.coeff[static_cast<size_t>(t)];
        if (sgn(v) >= 0) continue;
        col_pool.push_back(static_cast<int>(i));
        added[i] = 1;
        s.add_column(pool_column(p.rows[i], rows), Rat(0));
        ++taken;
    }
    return taken;
}

inline std::vector<Rat> entropy_from_duals(const lp::Simplex& s, int classes) {
    auto pi = s.duals();
    std::vector<Rat> h(static_cast<size_t>(classes));
    for (int c = 0; c < classes; ++c) h[static_cast<size_t>(c)] = -pi[static_cast<size_t>(c)];
    return h;
}

struct MasterResult {
    Rat optimum;
    std::vector<std::pair<int, Rat>> weights;  // (pool index, weight), ascending
};

// Solves max w subject to, per class C,
//   sum_e y_e e_C - y_a[C=W] - y_b[C=S] + w[C=full] = 0
// with 0 <= y_a <= a, 0 <= y_b <= b, y >= 0, generating elemental
// columns on demand. The row multipliers recover the primal entropy
// vector, whose feasibility over the whole pool certifies optimality.
inline MasterResult solve_master(const Rat& a, const Rat& b, bool with_dependency_columns) {
    const Pool& p = pool();
    const int C = p.class_count;
    const int rows = C + 2;

    std::vector<std::vector<Rat>> cols;
    std::vector<Rat> costs;
    std::vector<int> col_pool;
    auto push_col = [&](std::vector<Rat> col, Rat cost, int pool_idx) {
        cols.push_back(std::move(col));
        costs.push_back(std::move(cost));
        col_pool.push_back(pool_idx);
    };

    std::vector<Rat> col(static_cast<size_t>(rows), Rat(0));
    col[static_cast<size_t>(p.idx_w)] = -1;
    col[static_cast<size_t>(C)] = 1;
    push_col(col, Rat(0), -1);  // y_a
    std::fill(col.begin(), col.end(), Rat(0));
    col[static_cast<size_t>(C)] = 1;
    push_col(col, Rat(0), -1);  // slack of y_a <= a
    std::fill(col.begin(), col.end(), Rat(0));
    col[static_cast<size_t>(p.idx_s)] = -1;
    col[static_cast<size_t>(C + 1)] = 1;
    push_col(col, Rat(0), -1);  // y_b
    std::fill(col.begin(), col.end(), Rat(0));
    col[static_cast<size_t>(C + 1)] = 1;
    push_col(col, Rat(0), -1);  // slack of y_b <= b
    std::fill(col.begin(), col.end(), Rat(0));
    col[static_cast<size_t>(p.idx_full)] = 1;
    push_col(col, Rat(-1), -1);  // w+
    std::fill(col.begin(), col.end(), Rat(0));
    col[static_cast<size_t>(p.idx_full)] = -1;
    push_col(col, Rat(1), -1);  // w-

    if (with_dependency_columns) {
        // Explicit rows for the reconstruction and regeneration
        // equalities; the closure should have absorbed them, so their
        // class reductions cancel and the optimum must not move.
        std::vector<std::vector<std::pair<std::uint32_t, int>>> eqs;
        for (int drop = 1; drop <= 4; ++drop) {
            std::uint32_t triple = 0;
            for (int i = 1; i <= 4; ++i)
                if (i != drop) triple |= 1u << w_index(i);
            eqs.push_back({{kFullSet, 1}, {triple, -1}});
        }
        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= 4; ++j) {
                if (i == j) continue;
                std::uint32_t wi = 1u << w_index(i);
                eqs.push_back({{wi | (1u << s_index(i, j)), 1}, {wi, -1}});
            }
        for (int j = 1; j <= 4; ++j) {
            std::uint32_t column = 0;
            for (int i = 1; i <= 4; ++i)
                if (i != j) column |= 1u << s_index(i, j);
            eqs.push_back({{column | (1u << w_index(j)), 1}, {column, -1}});
        }
        for (const auto& eq : eqs) {
            std::fill(col.begin(), col.end(), Rat(0));
            for (const auto& [mask, c] : eq)
                col[static_cast<size_t>(coordinate_index(mask))] += c;
            push_col(col, Rat(0), -1);
            for (auto& v : col) v = -v;
            push_col(col, Rat(0), -1);
        }
    }

    std::vector<char> added(p.rows.size(), 0);
    for (size_t i = 0; i < p.rows.size(); ++i)
        if (p.rows[i].near) {
            added[i] = 1;
            auto dense = pool_column(p.rows[i], rows);
            push_col(dense, Rat(0), static_cast<int>(i));
        }

    lp::Problem prob;
    prob.rows.assign(static_cast<size_t>(rows), std::vector<Rat>(cols.size(), Rat(0)));
    for (size_t j = 0; j < cols.size(); ++j)
        for (int r = 0; r < rows; ++r)
            prob.rows[static_cast<size_t>(r)][j] = cols[j][static_cast<size_t>(r)];
    prob.rhs.assign(static_cast<size_t>(rows), Rat(0));
    prob.rhs[static_cast<size_t>(C)] = a;
    prob.rhs[static_cast<size_t>(C + 1)] = b;
    prob.cost = costs;

    lp::Simplex s(prob);
    if (s.solve() != lp::Status::OPTIMAL)
        throw std::logic_error("objective master did not reach an optimum");
    std::vector<Rat> h;
    for (int round = 0;; ++round) {
        if (round > kGenRoundLimit) throw std::logic_error("column generation did not converge");
        h = entropy_from_duals(s, C);
        if (add_violated_columns(s, h, rows, added, col_pool) == 0) break;
        if (s.resolve() != lp::Status::OPTIMAL)
            throw std::logic_error("objective master lost optimality");
    }
    if (h[static_cast<size_t>(p.idx_full)] != 1)
        throw std::logic_error("entropy normalization broke in the master");

    auto x = s.primal();
    MasterResult result;
    result.optimum = x[4] - x[5];
    if (result.optimum != -s.objective())
        throw std::logic_error("master objective bookkeeping mismatch");
    if (x[0] != a || x[2] != b)
        throw std::logic_error("cap multipliers did not bind as expected");
    for (size_t j = 6; j < x.size(); ++j)
        if (col_pool[j] >= 0 && sgn(x[j]) != 0) result.weights.emplace_back(col_pool[j], x[j]);
    std::sort(result.weights.begin(), result.weights.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    return result;
}

inline const MasterResult& solved_master(const Rat& a, const Rat& b) {
    static std::map<std::pair<Rat, Rat>, MasterResult> cache;
    auto key = std::make_pair(a, b);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, solve_master(a, b, false)).first;
    return it->second;
}

inline void validate_objective(const Rat& a, const Rat& b) {
    if (sgn(a) < 0 || sgn(b) < 0)
        throw std::invalid_argument("objective coefficients must be nonnegative");
    if (sgn(a) == 0 && sgn(b) == 0)
        throw std::invalid_argument("objective coefficients must not both be zero");
}

// Nonnegative elemental weights with  sum_e y_e * e = target  exactly,
// found by driving an artificial copy of the target to zero and
// pricing pool columns in.
inline std::vector<std::pair<int, Rat>> recombine_from_pool(const std::vector<Rat>& target,
                                                            const std::vector<int>& prefer) {
    const Pool& p = pool();
    const int C = p.class_count;
    std::vector<std::vector<Rat>> cols;
    std::vector<Rat> costs;
    std::vector<int> col_pool;
    std::vector<char> added(p.rows.size(), 0);

    cols.push_back(target);
    costs.emplace_back(1);
    col_pool.push_back(-1);
    auto add_pool_col = [&](size_t idx) {
        if (added[idx]) return;
        added[idx] = 1;
        cols.push_back(pool_column(p.rows[idx], C));
        costs.emplace_back(0);
        col_pool.push_back(static_cast<int>(idx));
    };
    for (size_t i = 0; i < p.rows.size(); ++i)
        if (p.rows[i].near) add_pool_col(i);
    for (int idx : prefer) add_pool_col(static_cast<size_t>(idx));

    lp::Problem prob;
    prob.rows.assign(static_cast<size_t>(C), std::vector<Rat>(cols.size(), Rat(0)));
    for (size_t j = 0; j < cols.size(); ++j)
        for (int r = 0; r < C; ++r) prob.rows[static_cast<size_t>(r)][j] = cols[j][static_cast<size_t>(r)];
    prob.rhs = target;
    prob.cost = costs;

    lp::Simplex s(prob);
    if (s.solve() != lp::Status::OPTIMAL)
        throw std::logic_error("recombination master did not reach an optimum");
    for (int round = 0;; ++round) {
        if (round > kGenRoundLimit) throw std::logic_error("recombination did not converge");
        if (sgn(s.objective()) == 0) break;
        auto pi = s.duals();
        int taken = 0;
        for (size_t i = 0; i < p.rows.size() && taken < kGenBatch; ++i) {
            if (added[i]) continue;
            const auto& row = p.rows[i];
            Rat reduced = 0;
            for (int t = 0; t < row.size; ++t)
                reduced -= pi[row.coord[static_cast<size_t>(t)]] * row.coeff[static_cast<size_t>(t)];
            if (sgn(reduced) >= 0) continue;
            added[i] = 1;
            col_pool.push_back(static_cast<int>(i));
            s.add_column(pool_column(p.rows[i], C), Rat(0));
            ++taken;
        }
        if (taken == 0)
            throw std::logic_error("target is not recombinable from the elemental pool");
        if (s.resolve() != lp::Status::OPTIMAL)
            throw std::logic_error("recombination master lost optimality");
    }
    auto x = s.primal();
    if (sgn(x[0]) != 0) throw std::logic_error("artificial weight survived recombination");
    std::vector<std::pair<int, Rat>> weights;
    for (size_t j = 1; j < x.size(); ++j)
        if (sgn(x[j]) != 0) weights.emplace_back(col_pool[j], x[j]);
    std::sort(weights.begin(), weights.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    return weights;
}

inline std::vector<Rat> certificate_target_vector(const Rat& a, const Rat& b, const Rat& c) {
    const Pool& p = pool();
    std::vector<Rat> t(static_cast<size_t>(p.class_count), Rat(0));
    t[static_cast<size_t>(p.idx_w)] += a;
    t[static_cast<size_t>(p.idx_s)] += b;
    t[static_cast<size_t>(p.idx_full)] -= c;
    return t;
}

}  // namespace detail

inline Rat min_objective(const Rat& a, const Rat& b) {
    detail::validate_objective(a, b);
    return detail::solved_master(a, b).optimum;
}

inline Rat min_objective_with_dependency_rows(const Rat& a, const Rat& b) {
    detail::validate_objective(a, b);
    return detail::solve_master(a, b, true).optimum;
}

struct PointCheck {
    bool feasible = false;
    Rat witness_a{0};
    Rat witness_b{0};
};

// Decides whether (alpha_bar, beta_bar) admits a feasible entropy
// vector; an unbounded dual ray yields the separating objective.
inline PointCheck check_point(const Rat& alpha_bar, const Rat& beta_bar) {
    if (sgn(alpha_bar) < 0 || sgn(beta_bar) < 0)
        throw std::invalid_argument("point coordinates must be nonnegative");
    const auto& p = detail::pool();
    const int C = p.class_count;

    std::vector<std::vector<Rat>> cols;
    std::vector<Rat> costs;
    std::vector<int> col_pool;
    std::vector<char> added(p.rows.size(), 0);
    std::vector<Rat> col(static_cast<size_t>(C), Rat(0));
    col[static_cast<size_t>(p.idx_w)] = -1;
    cols.push_back(col);
    costs.push_back(alpha_bar);
    col_pool.push_back(-1);
    std::fill(col.begin(), col.end(), Rat(0));
    col[static_cast<size_t>(p.idx_s)] = -1;
    cols.push_back(col);
    costs.push_back(beta_bar);
    col_pool.push_back(-1);
    std::fill(col.begin(), col.end(), Rat(0));
    col[static_cast<size_t>(p.idx_full)] = 1;
    cols.push_back(col);
    costs.emplace_back(-1);
    col_pool.push_back(-1);
    std::fill(col.begin(), col.end(), Rat(0));
    col[static_cast<size_t>(p.idx_full)] = -1;
    cols.push_back(col);
    costs.emplace_back(1);
    col_pool.push_back(-1);
    for (size_t i = 0; i < p.rows.size(); ++i)
        if (p.rows[i].near) {
            added[i] = 1;
            cols.push_back(detail::pool_column(p.rows[i], C));
            costs.emplace_back(0);
            col_pool.push_back(static_cast<int>(i));
        }

    lp::Problem prob;
    prob.rows.assign(static_cast<size_t>(C), std::vector<Rat>(cols.size(), Rat(0)));
    for (size_t j = 0; j < cols.size(); ++j)
        for (int r = 0; r < C; ++r) prob.rows[static_cast<size_t>(r)][j] = cols[j][static_cast<size_t>(r)];
    prob.rhs.assign(static_cast<size_t>(C), Rat(0));
    prob.cost = costs;

    lp::Simplex s(prob);
    auto status = s.solve();
    for (int round = 0;; ++round) {
        if (round > detail::kGenRoundLimit)
            throw std::logic_error("point check did not converge");
        if (status == lp::Status::UNBOUNDED) {
            auto ray = s.ray();
            Rat ya = ray[0], yb = ray[1];
            Rat w = ray[2] - ray[3];
            if (sgn(w - alpha_bar * ya - beta_bar * yb) <= 0)
                throw std::logic_error("separating ray fails its own inequality");
            if (sgn(ya) == 0 && sgn(yb) == 0)
                throw std::logic_error("separating ray has no objective direction");
            mpz_class scale = lcm(ya.get_den(), yb.get_den());
            mpz_class na = ya.get_num() * (scale / ya.get_den());
            mpz_class nb = yb.get_num() * (scale / yb.get_den());
            mpz_class g = gcd(na, nb);
            return {false, Rat(na / g), Rat(nb / g)};
        }
        if (status != lp::Status::OPTIMAL)
            throw std::logic_error("point master in unexpected state");
        auto h = detail::entropy_from_duals(s, C);
        if (detail::add_violated_columns(s, h, C, added, col_pool) == 0) {
            if (sgn(s.objective()) != 0)
                throw std::logic_error("feasible point master with nonzero objective");
            return {true, Rat(0), Rat(0)};
        }
        status = s.resolve();
    }
}

inline ProofCertificate extract_certificate(const Rat& a, const Rat& b, const Rat& c) {
    detail::validate_objective(a, b);
    if (sgn(c) < 0)
        throw std::invalid_argument("certificate constant must be nonnegative");
    const auto& master = detail::solved_master(a, b);
    if (c > master.optimum) throw RefusedError(master.optimum);

    std::vector<std::pair<int, Rat>> weights;
    if (c == master.optimum) {
        weights = master.weights;
    } else {
        std::vector<int> prefer;
        for (const auto& [idx, w] : master.weights) prefer.push_back(idx);
        weights = detail::recombine_from_pool(detail::certificate_target_vector(a, b, c), prefer);
    }

    ProofCertificate cert;
    cert.a = a;
    cert.b = b;
    cert.c = c;
    auto push = [&](const Rat& w, const LinearInequality& q) {
        if (sgn(w) == 0) return;
        cert.lines.push_back({w, q.name, render_inequality(q)});
    };
    push(a, alpha_cap_inequality());
    push(b, beta_cap_inequality());
    push(c, b_norm_inequality());
    for (const auto& [idx, w] : weights) push(w, elemental_inequality(static_cast<size_t>(idx)));
    auto vr = verify_certificate(cert);
    if (!vr.ok) throw std::logic_error("extracted certificate failed verification: " + vr.diagnostic);
    return cert;
}

inline ProofCertificate sparsify_certificate(const ProofCertificate& cert) {
    auto vr = verify_certificate(cert);
    if (!vr.ok) throw std::invalid_argument("cannot sparsify an invalid certificate: " + vr.diagnostic);
    const auto& p = detail::pool();
    const int C = p.class_count;

    struct Col {
        std::string name;
        LinearInequality ineq;
    };
    std::vector<Col> support;
    std::unordered_set<std::string> seen;
    for (const auto& line : cert.lines) {
        if (line.name.rfind("elem:", 0) != 0) continue;
        if (!seen.insert(line.name).second) continue;
        support.push_back({line.name, inequality_from_name(line.name)});
    }

    auto target = detail::certificate_target_vector(cert.a, cert.b, cert.c);
    std::vector<std::pair<std::string, Rat>> solution;
    for (;;) {
        if (support.empty()) {
            solution.clear();
            break;
        }
        lp::Problem prob;
        prob.rows.assign(static_cast<size_t>(C), std::vector<Rat>(support.size(), Rat(0)));
        for (size_t j = 0; j < support.size(); ++j)
            for (const auto& [idx, coeff] : support[j].ineq.terms)
                prob.rows[static_cast<size_t>(idx)][j] = coeff;
        prob.rhs = target;
        prob.cost.assign(support.size(), Rat(1));
        lp::Simplex s(prob);
        if (s.solve() != lp::Status::OPTIMAL)
            throw std::logic_error("sparsification lost feasibility");
        auto x = s.primal();
        std::vector<Col> kept;
        solution.clear();
        for (size_t j = 0; j < support.size(); ++j)
            if (sgn(x[j]) != 0) {
                kept.push_back(support[j]);
                solution.emplace_back(support[j].name, x[j]);
            }
        if (kept.size() == support.size()) break;
        support = std::move(kept);
    }

    auto gen_key = [](const std::string& name) {
        LinearInequality q = inequality_from_name(name);
        // Elemental names regenerate canonically; key on that text.
        return q.name;
    };
    std::sort(solution.begin(), solution.end(),
              [&](const auto& l, const auto& r) { return gen_key(l.first) < gen_key(r.first); });

    ProofCertificate out;
    out.a = cert.a;
    out.b = cert.b;
    out.c = cert.c;
    auto push = [&](const Rat& w, const LinearInequality& q) {
        if (sgn(w) == 0) return;
        out.lines.push_back({w, q.name, render_inequality(q)});
    };
    push(cert.a, alpha_cap_inequality());
    push(cert.b, beta_cap_inequality());
    push(cert.c, b_norm_inequality());
    for (const auto& [name, w] : solution) push(w, inequality_from_name(name));
    auto vr2 = verify_certificate(out);
    if (!vr2.ok) throw std::logic_error("sparsified certificate failed verification: " + vr2.diagnostic);
    return out;
}

}  // namespace regen

#endif
