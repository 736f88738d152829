#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "doctest.h"
#include "zdl/errors.hpp"
#include "zdl/zerostore.hpp"

using namespace zdl;
using scan::ZeroRecord;
using store::Interval;
using store::StoreSegment;
using store::ZeroStore;

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kFp = 0x1234abcd5678ef01ULL;

struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& name) : path(fs::temp_directory_path() / ("zdl_test_" + name)) {
        fs::remove(path);
    }
    ~TempFile() { fs::remove(path); }
    [[nodiscard]] std::string str() const { return path.string(); }
};

ZeroRecord rec(int k, double beta, double gamma) {
    ZeroRecord r;
    r.k = k;
    r.beta = beta;
    r.gamma = gamma;
    r.error_radius = 0x1.6a09e667f3bcdp-35;
    return r;
}

StoreSegment segment(int k, double t0, double t1, int n, std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> g(t0, t1), b(0.5, 1.5);
    StoreSegment s;
    s.k = k;
    s.t_range = {t0, t1};
    s.policy_fingerprint = kFp;
    for (int i = 0; i < n; ++i) s.records.push_back(rec(k, b(rng), g(rng)));
    std::sort(s.records.begin(), s.records.end(), [](const auto& a, const auto& c) { return a.gamma < c.gamma; });
    s.created_at = "2026-01-01T00:00:00Z";
    s.tool_version = "test";
    return s;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("hex floats round-trip bit-exactly") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 2000; ++i) {
        const double v = u(rng) * std::pow(2.0, static_cast<int>(rng() % 200) - 100);
        CHECK(store::parse_hex(store::hex_double(v)) == v);
    }
    CHECK(store::hex_double(0.5) == "0x1p-1");
    CHECK(store::parse_hex(store::hex_double(std::numeric_limits<double>::denorm_min())) ==
          std::numeric_limits<double>::denorm_min());
    CHECK(store::hex_double(-0.0) == "-0x0p+0");
    CHECK_THROWS_AS(store::parse_hex("1.5"), Error);
    CHECK_THROWS_AS(store::parse_hex("0x1.8p+1junk"), Error);
}

TEST_CASE("crc32 reference value") {
    CHECK(store::crc32_of("123456789") == 0xcbf43926u);
}

TEST_CASE("gap algebra") {
    const auto g = store::interval_gaps(0.0, 10.0, {{2.0, 3.0}, {5.0, 7.0}, {6.0, 8.0}});
    REQUIRE(g.size() == 3);
    CHECK(g[0] == Interval{0.0, 2.0});
    CHECK(g[1] == Interval{3.0, 5.0});
    CHECK(g[2] == Interval{8.0, 10.0});
    CHECK(store::interval_gaps(1.0, 2.0, {{0.0, 5.0}}).empty());
}

TEST_CASE("empty store is all gap") {
    TempFile f("empty");
    ZeroStore s(f.str());
    const auto r = s.get_range(1, 10.0, 20.0, kFp);
    CHECK(r.records.empty());
    REQUIRE(r.gaps.size() == 1);
    CHECK(r.gaps[0] == Interval{10.0, 20.0});
    CHECK_THROWS_AS(s.get_range(1, 20.0, 10.0, kFp), Error);
}

TEST_CASE("put, get and reopen") {
    TempFile f("roundtrip");
    const StoreSegment seg = segment(1, 0.0, 100.0, 40);
    {
        ZeroStore s(f.str());
        s.put_segment(seg);
        const auto r = s.get_range(1, 0.0, 100.0, kFp);
        CHECK(r.gaps.empty());
        CHECK(r.records == seg.records);
    }
    ZeroStore again(f.str());
    REQUIRE(again.segments().size() == 1);
    const StoreSegment& back = again.segments()[0];
    CHECK(back.records == seg.records);
    CHECK(back.t_range == seg.t_range);
    CHECK(back.created_at == seg.created_at);
    CHECK(back.tool_version == seg.tool_version);
    CHECK(again.recovery().discarded_bytes == 0);

    const auto half = again.get_range(1, 50.0, 150.0, kFp);
    REQUIRE(half.gaps.size() == 1);
    CHECK(half.gaps[0] == Interval{100.0, 150.0});
    for (const auto& r : half.records) CHECK((r.gamma >= 50.0 && r.gamma < 100.0));
    // another policy or order sees nothing
    CHECK(again.get_range(1, 0.0, 100.0, kFp + 1).records.empty());
    CHECK(again.get_range(2, 0.0, 100.0, kFp).records.empty());
}

TEST_CASE("segments are validated") {
    TempFile f("validate");
    ZeroStore s(f.str());
    StoreSegment bad = segment(1, 0.0, 10.0, 3);
    bad.records[0].gamma = 12.0;
    CHECK_THROWS_AS(s.put_segment(bad), Error);
    StoreSegment unsorted = segment(1, 0.0, 10.0, 3);
    std::swap(unsorted.records[0], unsorted.records[2]);
    CHECK_THROWS_AS(s.put_segment(unsorted), Error);
    StoreSegment empty_range = segment(1, 5.0, 5.0, 0);
    CHECK_THROWS_AS(s.put_segment(empty_range), Error);
}

TEST_CASE("overlaps") {
    TempFile f("overlap");
    ZeroStore s(f.str());
    StoreSegment all = segment(1, 0.0, 100.0, 50);
    StoreSegment first = all;
    first.t_range = {0.0, 60.0};
    std::erase_if(first.records, [](const ZeroRecord& r) { return r.gamma >= 60.0; });
    s.put_segment(first);

    // identical records on the overlap: only [60, 100) is added
    s.put_segment(all);
    CHECK(s.get_range(1, 0.0, 100.0, kFp).records == all.records);
    CHECK(s.get_range(1, 0.0, 100.0, kFp).gaps.empty());

    StoreSegment clash = all;
    clash.records[3].beta += 1e-3;
    CHECK_THROWS_WITH_AS(s.put_segment(clash), doctest::Contains("OverlapConflict"), Error);
    for (const auto& seg : s.segments())
        for (const auto& other : s.segments())
            if (&seg != &other) CHECK((seg.t_range.t1 <= other.t_range.t0 || other.t_range.t1 <= seg.t_range.t0));
}

TEST_CASE("an interrupted final write is dropped, earlier damage is fatal") {
    TempFile f("recovery");
    {
        ZeroStore s(f.str());
        s.put_segment(segment(1, 0.0, 50.0, 10, 1));
        s.put_segment(segment(1, 50.0, 100.0, 10, 2));
    }
    const std::string full = slurp(f.path);
    const std::size_t second = full.find("\nZDLSEG ") + 1;
    REQUIRE(second > 1);

    // torn tail
    fs::resize_file(f.path, full.size() - 17);
    {
        ZeroStore s(f.str());
        CHECK(s.recovery().segments_loaded == 1);
        CHECK(s.recovery().discarded_bytes == full.size() - 17 - second);
        CHECK(s.get_range(1, 0.0, 100.0, kFp).gaps.size() == 1);
        s.put_segment(segment(1, 50.0, 100.0, 10, 2));
    }
    CHECK(slurp(f.path) == full);

    // a flipped payload byte in the first frame
    std::string broken = full;
    broken[second / 2] = broken[second / 2] == '1' ? '2' : '1';
    std::ofstream(f.path, std::ios::binary | std::ios::trunc) << broken;
    CHECK_THROWS_WITH_AS(ZeroStore(f.str()), doctest::Contains("CorruptSegment"), Error);
}

TEST_CASE("fingerprint tracks committed content") {
    TempFile a("fp_a"), b("fp_b");
    ZeroStore sa(a.str()), sb(b.str());
    CHECK(sa.fingerprint() == sb.fingerprint());
    sa.put_segment(segment(1, 0.0, 10.0, 4));
    CHECK(sa.fingerprint() != sb.fingerprint());
    sb.put_segment(segment(1, 0.0, 10.0, 4));
    CHECK(sa.fingerprint() == sb.fingerprint());
    CHECK(ZeroStore(a.str()).fingerprint() == sa.fingerprint());
}

TEST_CASE("export, import, export is byte-identical") {
    TempFile a("exp_a"), b("exp_b");
    ZeroStore sa(a.str());
    sa.put_segment(segment(2, 10.0, 30.0, 25, 9));
    sa.put_segment(segment(2, 30.0, 40.0, 5, 10));
    for (auto fmt : {store::Format::csv, store::Format::jsonl}) {
        const std::string first = sa.export_range(2, 10.0, 40.0, kFp, fmt);
        TempFile c(fmt == store::Format::csv ? "exp_c" : "exp_j");
        ZeroStore sc(c.str());
        sc.import_range(first, fmt, 2, 10.0, 40.0, kFp);
        CHECK(sc.export_range(2, 10.0, 40.0, kFp, fmt) == first);
        CHECK(sc.get_range(2, 10.0, 40.0, kFp).records == sa.get_range(2, 10.0, 40.0, kFp).records);
    }
    const std::string csv = sa.export_range(2, 10.0, 40.0, kFp, store::Format::csv);
    CHECK(csv.rfind("k,beta_hex,gamma_hex,multiplicity,error_radius_hex,method\n", 0) == 0);
    CHECK(store::parse_export(csv, store::Format::csv).size() == 30);
    CHECK_THROWS_WITH_AS(sa.export_range(2, 0.0, 40.0, kFp, store::Format::csv), doctest::Contains("GapsPresent"), Error);
    CHECK_THROWS_AS(store::format_from_string("xml"), Error);
    CHECK_THROWS_AS(store::parse_export("k,beta\n1,2\n", store::Format::csv), Error);
}
