#include "catch_amalgamated.hpp"

#include "stabcat/io.hpp"
#include "stabcat/tables.hpp"

using namespace stabcat;

namespace {

std::string golden(const std::string& name) { return io::read_text(std::string(STABCAT_GOLDEN_DIR) + "/" + name + ".md"); }

std::string replace_once(std::string s, const std::string& from, const std::string& to) {
    auto at = s.find(from);
    REQUIRE(at != std::string::npos);
    return s.replace(at, from.size(), to);
}

} // namespace

TEST_CASE("every golden table verifies", "[tables]") {
    for (auto& name : tables::names()) {
        INFO(name);
        auto v = tables::verify(name, golden(name));
        CHECK(v.match);
        CHECK(v.diff.empty());
    }
}

TEST_CASE("verify notices tampered goldens", "[tables]") {
    auto g = golden("a2-torsion");
    auto swapped = replace_once(g, "| ⟨S_2⟩ | ⟨S_1⟩ |", "| ⟨S_1⟩ | ⟨S_2⟩ |");
    CHECK_FALSE(tables::verify("a2-torsion", swapped).match);
    auto dropped = replace_once(g, "| ⟨S_2⟩ | ⟨S_1⟩ |\n", "");
    auto v = tables::verify("a2-torsion", dropped);
    CHECK_FALSE(v.match);
    CHECK_FALSE(v.diff.empty());
    CHECK_FALSE(tables::verify("a2-torsion", replace_once(g, "non-trivial pairs: 3", "non-trivial pairs: 4")).match);
}

TEST_CASE("verify ignores comments and generator order", "[tables]") {
    auto g = golden("a2-torsion");
    CHECK(tables::verify("a2-torsion", replace_once(g, "⟨P_1, S_1⟩", "⟨S_1, P_1⟩")).match);
    CHECK(tables::verify("a2-torsion", "<!-- another\nheader -->\n" + g).match);
}

TEST_CASE("unknown tables are refused", "[tables]") {
    CHECK_THROWS_AS(tables::generate("no-such-table"), parse_error);
    CHECK(tables::names().size() == 9);
}
