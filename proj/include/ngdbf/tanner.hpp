#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace ngdbf {

class AlistParseError : public std::runtime_error {
public:
    AlistParseError(int line, const std::string& what)
        : std::runtime_error("alist parse error at line " + std::to_string(line) + ": " + what),
          line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Sparse binary parity-check matrix with both adjacency directions.
///
/// check_neighbors(i) is N(i), the symbols of check i; symbol_neighbors(j) is
/// M(j), the checks of symbol j. Immutable after construction, so instances
/// can be shared freely across worker threads.
class ParityCheckMatrix {
public:
    /// Build from per-check neighbor lists (0-based symbol indices).
    /// Full codes have n > m; induced subgraphs may have m >= n.
    static ParityCheckMatrix from_check_lists(int symbol_count,
                                              const std::vector<std::vector<std::int32_t>>& rows) {
        if (symbol_count < 1) throw std::invalid_argument("ParityCheckMatrix: n must be >= 1");
        if (rows.empty()) throw std::invalid_argument("ParityCheckMatrix: m must be >= 1");
        ParityCheckMatrix h;
        h.n_ = symbol_count;
        h.m_ = static_cast<int>(rows.size());
        h.chk_off_.assign(h.m_ + 1, 0);
        std::vector<std::int32_t> sym_deg(h.n_, 0);
        for (int i = 0; i < h.m_; ++i) {
            const auto& row = rows[i];
            if (row.empty())
                throw std::invalid_argument("ParityCheckMatrix: check " + std::to_string(i) +
                                            " has degree 0");
            std::unordered_set<std::int32_t> seen;
            for (std::int32_t j : row) {
                if (j < 0 || j >= h.n_)
                    throw std::invalid_argument("ParityCheckMatrix: symbol index out of range");
                if (!seen.insert(j).second)
                    throw std::invalid_argument("ParityCheckMatrix: duplicate symbol in check " +
                                                std::to_string(i));
                ++sym_deg[j];
            }
            h.chk_off_[i + 1] = h.chk_off_[i] + static_cast<std::int32_t>(row.size());
        }
        h.chk_idx_.reserve(h.chk_off_[h.m_]);
        for (const auto& row : rows) h.chk_idx_.insert(h.chk_idx_.end(), row.begin(), row.end());

        // transpose view
        h.sym_off_.assign(h.n_ + 1, 0);
        for (int j = 0; j < h.n_; ++j) h.sym_off_[j + 1] = h.sym_off_[j] + sym_deg[j];
        h.sym_idx_.assign(h.sym_off_[h.n_], 0);
        std::vector<std::int32_t> fill(h.sym_off_.begin(), h.sym_off_.end() - 1);
        for (int i = 0; i < h.m_; ++i)
            for (std::int32_t e = h.chk_off_[i]; e < h.chk_off_[i + 1]; ++e)
                h.sym_idx_[fill[h.chk_idx_[e]]++] = i;
        return h;
    }

    int check_count() const { return m_; }
    int symbol_count() const { return n_; }
    std::int64_t edge_count() const { return static_cast<std::int64_t>(chk_idx_.size()); }

    std::span<const std::int32_t> check_neighbors(int i) const {
        return {chk_idx_.data() + chk_off_[i], static_cast<std::size_t>(chk_off_[i + 1] - chk_off_[i])};
    }
    std::span<const std::int32_t> symbol_neighbors(int j) const {
        return {sym_idx_.data() + sym_off_[j], static_cast<std::size_t>(sym_off_[j + 1] - sym_off_[j])};
    }
    int check_degree(int i) const { return chk_off_[i + 1] - chk_off_[i]; }
    int symbol_degree(int j) const { return sym_off_[j + 1] - sym_off_[j]; }

    int max_check_degree() const {
        int d = 0;
        for (int i = 0; i < m_; ++i) d = std::max(d, check_degree(i));
        return d;
    }
    int max_symbol_degree() const {
        int d = 0;
        for (int j = 0; j < n_; ++j) d = std::max(d, symbol_degree(j));
        return d;
    }

    /// j in N(i) <=> i in M(j), for every pair. Guaranteed by construction;
    /// exposed so loaders and tests can assert it independently.
    bool transpose_consistent() const {
        for (int i = 0; i < m_; ++i)
            for (std::int32_t j : check_neighbors(i)) {
                auto mj = symbol_neighbors(j);
                if (std::find(mj.begin(), mj.end(), i) == mj.end()) return false;
            }
        std::int64_t sym_edges = 0;
        for (int j = 0; j < n_; ++j) sym_edges += symbol_degree(j);
        return sym_edges == edge_count();
    }

private:
    int m_ = 0, n_ = 0;
    std::vector<std::int32_t> chk_off_, chk_idx_; // checks -> symbols
    std::vector<std::int32_t> sym_off_, sym_idx_; // symbols -> checks
};

/// Length-n vector over {-1,+1}: a decision vector or modulated codeword.
/// The all-zero codeword maps to all +1 (bit 0 -> +1, bit 1 -> -1).
class BipolarVector {
public:
    BipolarVector() = default;
    explicit BipolarVector(std::vector<std::int8_t> v) : v_(std::move(v)) {
        for (std::int8_t x : v_)
            if (x != 1 && x != -1)
                throw std::invalid_argument("BipolarVector: elements must be +1 or -1");
    }

    static BipolarVector all_plus(int n) {
        return BipolarVector(std::vector<std::int8_t>(static_cast<std::size_t>(n), 1));
    }

    /// Hard decisions from channel samples; sign(0) = +1.
    static BipolarVector sign_of(std::span<const double> y) {
        std::vector<std::int8_t> v(y.size());
        for (std::size_t k = 0; k < y.size(); ++k) v[k] = y[k] < 0.0 ? -1 : 1;
        return BipolarVector(std::move(v));
    }

    std::size_t size() const { return v_.size(); }
    std::int8_t operator[](std::size_t k) const { return v_[k]; }
    std::span<const std::int8_t> values() const { return v_; }
    bool operator==(const BipolarVector& o) const { return v_ == o.v_; }

private:
    std::vector<std::int8_t> v_;
};

/// s_i = prod_{j in N(i)} x_j for every check.
inline void syndrome_into(const ParityCheckMatrix& h, std::span<const std::int8_t> x,
                          std::span<std::int8_t> s) {
    if (static_cast<int>(x.size()) != h.symbol_count())
        throw std::invalid_argument("syndrome: decision vector length != n");
    for (int i = 0; i < h.check_count(); ++i) {
        std::int8_t p = 1;
        for (std::int32_t j : h.check_neighbors(i)) p = static_cast<std::int8_t>(p * x[j]);
        s[i] = p;
    }
}

inline std::vector<std::int8_t> syndrome(const ParityCheckMatrix& h,
                                         std::span<const std::int8_t> x) {
    std::vector<std::int8_t> s(h.check_count());
    syndrome_into(h, x, s);
    return s;
}

inline std::vector<std::int8_t> syndrome(const ParityCheckMatrix& h, const BipolarVector& x) {
    return syndrome(h, x.values());
}

/// True iff every parity check is satisfied (every s_i = +1).
inline bool is_codeword(const ParityCheckMatrix& h, std::span<const std::int8_t> x) {
    if (static_cast<int>(x.size()) != h.symbol_count())
        throw std::invalid_argument("is_codeword: decision vector length != n");
    for (int i = 0; i < h.check_count(); ++i) {
        std::int8_t p = 1;
        for (std::int32_t j : h.check_neighbors(i)) p = static_cast<std::int8_t>(p * x[j]);
        if (p != 1) return false;
    }
    return true;
}

inline bool is_codeword(const ParityCheckMatrix& h, const BipolarVector& x) {
    return is_codeword(h, x.values());
}

/// Restriction to a symbol subset: keeps every check with at least one
/// selected neighbor, with its neighborhood intersected with the subset.
/// Degree-1 rows appear where a kept check loses outside neighbors; they are
/// kept on purpose (their outside symbols are treated as pinned correct).
/// Column order follows the order of `symbols`.
inline ParityCheckMatrix induced_subgraph(const ParityCheckMatrix& h,
                                          std::span<const std::int32_t> symbols) {
    if (symbols.empty()) throw std::invalid_argument("induced_subgraph: empty symbol set");
    std::vector<std::int32_t> local(h.symbol_count(), -1);
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        const std::int32_t j = symbols[k];
        if (j < 0 || j >= h.symbol_count())
            throw std::invalid_argument("induced_subgraph: symbol index out of range");
        if (local[j] != -1) throw std::invalid_argument("induced_subgraph: duplicate symbol");
        local[j] = static_cast<std::int32_t>(k);
    }
    std::vector<std::vector<std::int32_t>> rows;
    for (int i = 0; i < h.check_count(); ++i) {
        std::vector<std::int32_t> row;
        for (std::int32_t j : h.check_neighbors(i))
            if (local[j] != -1) row.push_back(local[j]);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return ParityCheckMatrix::from_check_lists(static_cast<int>(symbols.size()), rows);
}

namespace detail {

// Whitespace tokenizer that tracks line numbers for alist diagnostics.
class LineLexer {
public:
    explicit LineLexer(std::istream& in) : in_(in) {}

    bool next_int(long long& out) {
        skip_ws();
        if (!in_ || in_.peek() == std::char_traits<char>::eof()) return false;
        std::string tok;
        while (in_) {
            const int c = in_.peek();
            if (c == std::char_traits<char>::eof() || std::isspace(c)) break;
            tok.push_back(static_cast<char>(in_.get()));
        }
        try {
            std::size_t pos = 0;
            out = std::stoll(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw AlistParseError(line_, "expected integer, got \"" + tok + "\"");
        }
        return true;
    }

    long long require_int(const char* what) {
        long long v;
        if (!next_int(v)) throw AlistParseError(line_, std::string("unexpected end of file, expected ") + what);
        return v;
    }

    /// Peeks whether the next token is a literal "0" (alist padding).
    bool try_consume_zero() {
        skip_ws();
        if (!in_ || in_.peek() != '0') return false;
        in_.get();
        const int c = in_.peek();
        if (c != std::char_traits<char>::eof() && !std::isspace(c)) {
            in_.unget();
            return false;
        }
        return true;
    }

    bool at_eof() {
        skip_ws();
        return !in_ || in_.peek() == std::char_traits<char>::eof();
    }

    int line() const { return line_; }

private:
    void skip_ws() {
        while (in_) {
            const int c = in_.peek();
            if (c == '\n') ++line_;
            if (c == std::char_traits<char>::eof() || !std::isspace(c)) break;
            in_.get();
        }
    }

    std::istream& in_;
    int line_ = 1;
};

} // namespace detail

/// Reads the alist interchange format:
///   n m
///   max_symbol_degree max_check_degree
///   per-symbol degrees (n), per-check degrees (m)
///   per-symbol 1-based check lists, per-check 1-based symbol lists
/// Both padded (zero-filled to the max degree) and unpadded lists are accepted.
/// The two list sections must be transposes of each other.
inline ParityCheckMatrix load_alist(std::istream& in) {
    detail::LineLexer lex(in);

    const long long n = lex.require_int("n");
    const long long m = lex.require_int("m");
    if (n < 1 || m < 1 || n > std::numeric_limits<std::int32_t>::max() ||
        m > std::numeric_limits<std::int32_t>::max())
        throw AlistParseError(lex.line(), "invalid dimensions n=" + std::to_string(n) +
                                              " m=" + std::to_string(m));
    const long long max_sym_deg = lex.require_int("max symbol degree");
    const long long max_chk_deg = lex.require_int("max check degree");
    if (max_sym_deg < 1 || max_sym_deg > m || max_chk_deg < 1 || max_chk_deg > n)
        throw AlistParseError(lex.line(), "max degrees out of range");

    std::vector<int> sym_deg(static_cast<std::size_t>(n));
    for (auto& d : sym_deg) {
        const long long v = lex.require_int("symbol degree");
        if (v < 0 || v > max_sym_deg)
            throw AlistParseError(lex.line(), "symbol degree " + std::to_string(v) +
                                                  " exceeds declared max " + std::to_string(max_sym_deg));
        d = static_cast<int>(v);
    }
    std::vector<int> chk_deg(static_cast<std::size_t>(m));
    for (auto& d : chk_deg) {
        const long long v = lex.require_int("check degree");
        if (v < 1 || v > max_chk_deg)
            throw AlistParseError(lex.line(), "check degree " + std::to_string(v) +
                                                  " out of range [1," + std::to_string(max_chk_deg) + "]");
        d = static_cast<int>(v);
    }

    auto read_lists = [&lex](long long count, const std::vector<int>& deg, long long max_deg,
                             long long peer_limit, const char* what) {
        std::vector<std::vector<std::int32_t>> lists(static_cast<std::size_t>(count));
        for (long long a = 0; a < count; ++a) {
            auto& list = lists[static_cast<std::size_t>(a)];
            list.reserve(static_cast<std::size_t>(deg[static_cast<std::size_t>(a)]));
            for (int e = 0; e < deg[static_cast<std::size_t>(a)]; ++e) {
                const long long v = lex.require_int(what);
                if (v < 1 || v > peer_limit)
                    throw AlistParseError(lex.line(), std::string(what) + " index " + std::to_string(v) +
                                                          " out of range");
                const auto idx = static_cast<std::int32_t>(v - 1);
                if (std::find(list.begin(), list.end(), idx) != list.end())
                    throw AlistParseError(lex.line(), std::string("duplicate ") + what + " index " +
                                                          std::to_string(v));
                list.push_back(idx);
            }
            // zero padding up to the declared max degree is tolerated
            for (long long e = deg[static_cast<std::size_t>(a)]; e < max_deg; ++e)
                if (!lex.try_consume_zero()) break;
        }
        return lists;
    };

    const auto sym_lists = read_lists(n, sym_deg, max_sym_deg, m, "check");
    const auto chk_lists = read_lists(m, chk_deg, max_chk_deg, n, "symbol");
    if (!lex.at_eof()) throw AlistParseError(lex.line(), "trailing data after neighbor lists");

    ParityCheckMatrix h = ParityCheckMatrix::from_check_lists(static_cast<int>(n), chk_lists);

    // the per-symbol section must agree with the transpose of the per-check one
    for (long long j = 0; j < n; ++j) {
        auto got = h.symbol_neighbors(static_cast<int>(j));
        std::vector<std::int32_t> want = sym_lists[static_cast<std::size_t>(j)];
        std::vector<std::int32_t> have(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        std::sort(have.begin(), have.end());
        if (want != have)
            throw AlistParseError(lex.line(), "symbol " + std::to_string(j + 1) +
                                                  " list disagrees with check lists (transpose mismatch)");
    }
    return h;
}

inline ParityCheckMatrix load_alist(const std::string& text) {
    std::istringstream in(text);
    return load_alist(in);
}

/// Canonical alist writer: sorted neighbor lists, zero-padded to max degree.
inline void emit_alist(const ParityCheckMatrix& h, std::ostream& out) {
    const int n = h.symbol_count(), m = h.check_count();
    const int dmax_sym = h.max_symbol_degree(), dmax_chk = h.max_check_degree();
    out << n << ' ' << m << '\n';
    out << dmax_sym << ' ' << dmax_chk << '\n';
    for (int j = 0; j < n; ++j) out << h.symbol_degree(j) << (j + 1 < n ? ' ' : '\n');
    for (int i = 0; i < m; ++i) out << h.check_degree(i) << (i + 1 < m ? ' ' : '\n');
    auto write_padded = [&out](std::span<const std::int32_t> list, int pad_to) {
        std::vector<std::int32_t> sorted(list.begin(), list.end());
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t e = 0; e < sorted.size(); ++e) out << (e ? " " : "") << sorted[e] + 1;
        for (int e = static_cast<int>(sorted.size()); e < pad_to; ++e) out << " 0";
        out << '\n';
    };
    for (int j = 0; j < n; ++j) write_padded(h.symbol_neighbors(j), dmax_sym);
    for (int i = 0; i < m; ++i) write_padded(h.check_neighbors(i), dmax_chk);
}

inline std::string emit_alist(const ParityCheckMatrix& h) {
    std::ostringstream out;
    emit_alist(h, out);
    return out.str();
}

} // namespace ngdbf
