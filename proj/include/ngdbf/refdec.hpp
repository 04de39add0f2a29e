#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "ngdbf/decoder.hpp"
#include "ngdbf/tanner.hpp"

namespace ngdbf {

/// Flooding normalized min-sum settings. alpha = 1 is plain min-sum.
struct NmsConfig {
    int T = 10;
    double alpha = 0.8;

    void validate() const {
        if (T < 1) throw std::invalid_argument("NmsConfig: T must be >= 1");
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw std::invalid_argument("NmsConfig: alpha must be in (0,1]");
    }
};

/// Normalized min-sum decoder, flooding schedule, early exit on parity.
/// Used as an independent cross-check of the bit-flipping machinery; it shares
/// nothing with the GDBF path but the Tanner graph. llr follows the
/// positive-means-+1 convention (e.g. 2y/sigma^2 for BPSK on AWGN).
inline PhaseResult nms_decode(const ParityCheckMatrix& h, std::span<const double> llr,
                              const NmsConfig& cfg) {
    cfg.validate();
    const int n = h.symbol_count(), m = h.check_count();
    if (llr.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("nms_decode: llr length != n");

    std::vector<std::int8_t> x(n);
    for (int j = 0; j < n; ++j) x[j] = llr[j] < 0.0 ? -1 : 1;
    if (is_codeword(h, x)) return {true, BipolarVector(std::move(x)), 0, false};

    // edges in check-major order
    std::vector<std::int32_t> chk_edge_off(m + 1, 0);
    for (int i = 0; i < m; ++i)
        chk_edge_off[i + 1] = chk_edge_off[i] + h.check_degree(i);
    const std::int32_t edges = chk_edge_off[m];
    std::vector<std::int32_t> edge_sym(edges);
    for (int i = 0; i < m; ++i) {
        std::int32_t e = chk_edge_off[i];
        for (std::int32_t j : h.check_neighbors(i)) edge_sym[e++] = j;
    }
    // per-symbol list of incident edge positions
    std::vector<std::int32_t> sym_edge_off(n + 1, 0), sym_edge(edges);
    for (std::int32_t e = 0; e < edges; ++e) ++sym_edge_off[edge_sym[e] + 1];
    for (int j = 0; j < n; ++j) sym_edge_off[j + 1] += sym_edge_off[j];
    {
        std::vector<std::int32_t> fill(sym_edge_off.begin(), sym_edge_off.end() - 1);
        for (std::int32_t e = 0; e < edges; ++e) sym_edge[fill[edge_sym[e]]++] = e;
    }

    std::vector<double> v2c(edges), c2v(edges);
    for (std::int32_t e = 0; e < edges; ++e) v2c[e] = llr[edge_sym[e]];

    for (int it = 1; it <= cfg.T; ++it) {
        // check update: extrinsic sign times normalized extrinsic minimum
        for (int i = 0; i < m; ++i) {
            double min1 = std::numeric_limits<double>::infinity(), min2 = min1;
            std::int32_t argmin = -1;
            int sgn = 1;
            for (std::int32_t e = chk_edge_off[i]; e < chk_edge_off[i + 1]; ++e) {
                const double a = std::abs(v2c[e]);
                if (v2c[e] < 0.0) sgn = -sgn;
                if (a < min1) {
                    min2 = min1;
                    min1 = a;
                    argmin = e;
                } else if (a < min2) {
                    min2 = a;
                }
            }
            for (std::int32_t e = chk_edge_off[i]; e < chk_edge_off[i + 1]; ++e) {
                const int s_own = v2c[e] < 0.0 ? -1 : 1;
                c2v[e] = cfg.alpha * sgn * s_own * (e == argmin ? min2 : min1);
            }
        }
        // symbol update and hard decision
        for (int j = 0; j < n; ++j) {
            double total = llr[j];
            for (std::int32_t p = sym_edge_off[j]; p < sym_edge_off[j + 1]; ++p)
                total += c2v[sym_edge[p]];
            x[j] = total < 0.0 ? -1 : 1;
            for (std::int32_t p = sym_edge_off[j]; p < sym_edge_off[j + 1]; ++p)
                v2c[sym_edge[p]] = total - c2v[sym_edge[p]];
        }
        if (is_codeword(h, x)) return {true, BipolarVector(std::move(x)), it, false};
    }
    return {false, BipolarVector(std::move(x)), cfg.T, false};
}

} // namespace ngdbf
