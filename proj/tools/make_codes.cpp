// Generates the LDPC parity-check fixtures bundled under codes/.
//
//   peg_504x1008.alist    (3,6)-regular rate-1/2 code, n=1008, progressive
//                         edge growth with a fixed seed
//   reg_384x2048.alist    (6,32)-regular n=2048 code in the 802.3an class,
//                         built as a 6x32 array of 64x64 affine permutation
//                         blocks over GF(64); girth >= 6 by construction
//
// Usage: ngdbf-codegen <output-dir>

#include <algorithm>
#include <cstdint>
#include <deque>
#include <fstream>
#include <iostream>
#include <random>
#include <vector>

#include "ngdbf/tanner.hpp"

namespace {

using ngdbf::ParityCheckMatrix;

// ---- progressive edge growth, (dv,dc)-regular ----
//
// For each new symbol edge, BFS the current graph from the symbol and connect
// to a check as far away as possible, preferring low degree. Checks are capped
// at dc so the result is exactly regular.
ParityCheckMatrix peg_regular(int n, int m, int dv, int dc, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::int32_t>> chk_rows(m);
    std::vector<std::vector<std::int32_t>> sym_cols(n);
    std::vector<int> chk_deg(m, 0);

    auto bfs_check_depths = [&](int root_symbol) {
        // depth of every check from the symbol in the current graph; -1 unreached
        std::vector<int> depth(m, -1);
        std::vector<char> sym_seen(n, 0);
        sym_seen[root_symbol] = 1;
        std::deque<std::pair<int, int>> frontier; // (check, depth)
        for (std::int32_t c : sym_cols[root_symbol]) {
            if (depth[c] == -1) {
                depth[c] = 0;
                frontier.emplace_back(c, 0);
            }
        }
        while (!frontier.empty()) {
            auto [c, d] = frontier.front();
            frontier.pop_front();
            for (std::int32_t s : chk_rows[c]) {
                if (sym_seen[s]) continue;
                sym_seen[s] = 1;
                for (std::int32_t c2 : sym_cols[s]) {
                    if (depth[c2] == -1) {
                        depth[c2] = d + 1;
                        frontier.emplace_back(c2, d + 1);
                    }
                }
            }
        }
        return depth;
    };

    for (int j = 0; j < n; ++j) {
        for (int e = 0; e < dv; ++e) {
            const auto depth = bfs_check_depths(j);
            // candidates: capacity left, not already adjacent, as deep (or
            // unreached) as possible, then minimal degree, random tie-break
            int best = -1;
            long best_key = -1;
            std::vector<int> ties;
            for (int c = 0; c < m; ++c) {
                if (chk_deg[c] >= dc) continue;
                if (depth[c] == 0) continue; // already adjacent to j
                const long dist = depth[c] == -1 ? 1'000'000L : depth[c];
                const long key = dist * 1000L - chk_deg[c];
                if (key > best_key) {
                    best_key = key;
                    ties.clear();
                }
                if (key == best_key) ties.push_back(c);
            }
            if (ties.empty()) {
                std::cerr << "peg: no candidate check for symbol " << j << " edge " << e << "\n";
                std::exit(1);
            }
            best = ties[rng() % ties.size()];
            chk_rows[best].push_back(j);
            sym_cols[j].push_back(best);
            ++chk_deg[best];
        }
    }
    return ParityCheckMatrix::from_check_lists(n, chk_rows);
}

// ---- GF(64) arithmetic, primitive polynomial x^6 + x + 1 ----

int gf64_mul(int a, int b) {
    int p = 0;
    while (b) {
        if (b & 1) p ^= a;
        b >>= 1;
        a <<= 1;
        if (a & 0x40) a ^= 0x43; // reduce by x^6 + x + 1
    }
    return p;
}

// 6x32 array of 64x64 blocks; block (i,j) maps check offset r to symbol
// offset a_j * r + b_i over GF(64). Distinct a_j and distinct b_i rule out
// 4-cycles, so the girth is at least 6.
ParityCheckMatrix affine_632() {
    const int q = 64, gamma = 6, rho = 32;
    // a_j = alpha^j (alpha = x, i.e. 2); b_i = i
    std::vector<int> a(rho);
    int pw = 1;
    for (int j = 0; j < rho; ++j) {
        a[j] = pw;
        pw = gf64_mul(pw, 2);
    }
    std::vector<std::vector<std::int32_t>> rows(gamma * q);
    for (int i = 0; i < gamma; ++i)
        for (int r = 0; r < q; ++r) {
            auto& row = rows[i * q + r];
            row.reserve(rho);
            for (int j = 0; j < rho; ++j) {
                const int c = gf64_mul(a[j], r) ^ i;
                row.push_back(static_cast<std::int32_t>(j * q + c));
            }
        }
    return ParityCheckMatrix::from_check_lists(rho * q, rows);
}

int gf2_rank(const ParityCheckMatrix& h) {
    const int n = h.symbol_count(), m = h.check_count();
    const int words = (n + 63) / 64;
    std::vector<std::vector<std::uint64_t>> rows(m, std::vector<std::uint64_t>(words, 0));
    for (int i = 0; i < m; ++i)
        for (std::int32_t j : h.check_neighbors(i)) rows[i][j >> 6] ^= 1ULL << (j & 63);
    int rank = 0;
    for (int col = 0; col < n && rank < m; ++col) {
        const int w = col >> 6;
        const std::uint64_t bit = 1ULL << (col & 63);
        int pivot = -1;
        for (int r = rank; r < m; ++r)
            if (rows[r][w] & bit) {
                pivot = r;
                break;
            }
        if (pivot == -1) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int r = 0; r < m; ++r)
            if (r != rank && (rows[r][w] & bit))
                for (int k = 0; k < words; ++k) rows[r][k] ^= rows[rank][k];
        ++rank;
    }
    return rank;
}

int shortest_cycle_upper_bound(const ParityCheckMatrix& h, int probes) {
    // BFS girth probe from a sample of symbols (exact if probes >= n)
    int best = 1 << 30;
    const int n = h.symbol_count();
    for (int p = 0; p < probes; ++p) {
        const int root = static_cast<int>((static_cast<long long>(p) * n) / probes);
        std::vector<int> sym_depth(n, -1), chk_depth(h.check_count(), -1);
        std::vector<int> sym_parent(n, -1), chk_parent(h.check_count(), -1);
        sym_depth[root] = 0;
        std::deque<int> q{root}; // symbols encoded as j, checks as n + i
        std::deque<int> nodes{root};
        while (!nodes.empty()) {
            const int u = nodes.front();
            nodes.pop_front();
            if (u < n) {
                for (std::int32_t c : h.symbol_neighbors(u)) {
                    if (chk_depth[c] == -1) {
                        chk_depth[c] = sym_depth[u] + 1;
                        chk_parent[c] = u;
                        nodes.push_back(n + c);
                    } else if (chk_parent[c] != u && sym_parent[u] != c) {
                        best = std::min(best, sym_depth[u] + chk_depth[c] + 1);
                    }
                }
            } else {
                const int c = u - n;
                for (std::int32_t s : h.check_neighbors(c)) {
                    if (sym_depth[s] == -1) {
                        sym_depth[s] = chk_depth[c] + 1;
                        sym_parent[s] = c;
                        nodes.push_back(s);
                    } else if (sym_parent[s] != c && chk_parent[c] != s) {
                        best = std::min(best, chk_depth[c] + sym_depth[s] + 1);
                    }
                }
            }
        }
    }
    return best;
}

void write_code(const ParityCheckMatrix& h, const std::string& path, const char* label) {
    std::ofstream out(path);
    if (!out) {
        std::cerr << "cannot open " << path << "\n";
        std::exit(1);
    }
    ngdbf::emit_alist(h, out);
    const int rank = gf2_rank(h);
    const int n = h.symbol_count();
    std::cout << label << ": n=" << n << " m=" << h.check_count()
              << " sym_deg=" << h.max_symbol_degree() << " chk_deg=" << h.max_check_degree()
              << " rank=" << rank << " rate=" << static_cast<double>(n - rank) / n
              << " girth<=" << shortest_cycle_upper_bound(h, 64) << " -> " << path << "\n";
}

} // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : ".";
    write_code(peg_regular(1008, 504, 3, 6, 1ULL), dir + "/peg_504x1008.alist",
               "peg_504x1008");
    write_code(affine_632(), dir + "/reg_384x2048.alist", "reg_384x2048");
    return 0;
}
