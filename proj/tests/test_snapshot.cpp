#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "vplk/errors.hpp"
#include "vplk/snapshot.hpp"

using namespace vplk;

TEST_CASE("snapshot round trip") {
    auto g = make_grid(1, 8, 8, 3.0);
    auto f = maxwellian(g, 1.0, Vec3(0.1, 0, 0), 1.2);
    SpatialField phi(g);
    for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = 0.1 * static_cast<double>(i);
    Snapshot s(g);
    s.add("plus", f);
    s.add("phi", phi);
    s.add("t", 0.25);

    auto path = std::filesystem::temp_directory_path() / "vplk_snapshot_test.bin";
    write_snapshot(path, s);
    auto r = read_snapshot(path);
    std::filesystem::remove(path);

    CHECK(r.grid() == g);
    CHECK(r.has("plus"));
    CHECK_FALSE(r.has("minus"));
    CHECK(r.dist("plus").values() == f.values());
    CHECK(r.spatial("phi").values() == phi.values());
    CHECK(r.scalar("t") == 0.25);
    CHECK_THROWS(r.dist("phi"));
    CHECK_THROWS(r.scalar("missing"));
}

TEST_CASE("corrupt snapshot") {
    auto path = std::filesystem::temp_directory_path() / "vplk_snapshot_bad.bin";
    {
        std::ofstream out(path, std::ios::binary);
        out << "NOPE";
    }
    CHECK_THROWS(read_snapshot(path));
    std::filesystem::remove(path);
}

TEST_CASE("number formatting and csv") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    std::ostringstream out;
    CsvWriter w(out, {"a", "b"});
    w.row({1.5, 2.0});
    CHECK(out.str() == "a,b\n1.5,2\n");
    CHECK_THROWS(w.row({1.0}));
}
