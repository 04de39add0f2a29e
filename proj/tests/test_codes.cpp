// Structural checks on the bundled parity-check fixtures.

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <set>

#include "ngdbf/tanner.hpp"

using namespace ngdbf;

namespace {

ParityCheckMatrix load_fixture(const std::string& name) {
    std::ifstream in(std::string(NGDBF_CODES_DIR) + "/" + name);
    REQUIRE(in.good());
    return load_alist(in);
}

bool four_cycle_free(const ParityCheckMatrix& h) {
    std::set<std::pair<std::int32_t, std::int32_t>> seen;
    for (int j = 0; j < h.symbol_count(); ++j) {
        const auto mj = h.symbol_neighbors(j);
        for (std::size_t a = 0; a < mj.size(); ++a)
            for (std::size_t b = a + 1; b < mj.size(); ++b) {
                auto p = std::minmax(mj[a], mj[b]);
                if (!seen.insert({p.first, p.second}).second) return false;
            }
    }
    return true;
}

} // namespace

TEST_CASE("peg_504x1008 is the expected (3,6)-regular rate-1/2 code") {
    const auto h = load_fixture("peg_504x1008.alist");
    REQUIRE(h.symbol_count() == 1008);
    REQUIRE(h.check_count() == 504);
    for (int j = 0; j < h.symbol_count(); ++j) REQUIRE(h.symbol_degree(j) == 3);
    for (int i = 0; i < h.check_count(); ++i) REQUIRE(h.check_degree(i) == 6);
    CHECK(h.transpose_consistent());
    CHECK(four_cycle_free(h));
}

TEST_CASE("reg_384x2048 is a (6,32)-regular n=2048 code") {
    const auto h = load_fixture("reg_384x2048.alist");
    REQUIRE(h.symbol_count() == 2048);
    REQUIRE(h.check_count() == 384);
    for (int j = 0; j < h.symbol_count(); ++j) REQUIRE(h.symbol_degree(j) == 6);
    for (int i = 0; i < h.check_count(); ++i) REQUIRE(h.check_degree(i) == 32);
    CHECK(h.transpose_consistent());
    CHECK(four_cycle_free(h));
}

TEST_CASE("toy fixtures load") {
    const auto t3 = load_fixture("toy_n3.alist");
    CHECK(t3.symbol_count() == 3);
    CHECK(t3.check_count() == 2);
    const auto t6 = load_fixture("toy_n6.alist");
    CHECK(t6.symbol_count() == 6);
    CHECK(t6.check_count() == 3);
    for (int j = 0; j < 6; ++j) CHECK(t6.symbol_degree(j) == 3);
    for (int i = 0; i < 3; ++i) CHECK(t6.check_degree(i) == 6);
}
