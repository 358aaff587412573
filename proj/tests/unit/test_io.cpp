// Copyright 2026 The condqpt Authors
// SPDX-License-Identifier: Apache-2.0

#include "condqpt/error.hpp"
#include "condqpt/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>

using namespace condqpt;
using namespace condqpt::io;
namespace fs = std::filesystem;

namespace {

RunConfig sample_config() {
    RunConfig c;
    c.model = "fermion";
    c.controls = {0.0, 0.25, 20.0};
    c.temperatures = {0.2};
    c.sizes = {4, 6};
    return c;
}

ThermalPoint sample_point() {
    ThermalPoint p;
    p.model = "fermion";
    p.N = 8;
    p.Np = 4;
    p.Ni = 4;
    p.control = 0.1;   // not exactly representable
    p.temperature = 1.0 / 3.0;
    p.p_cond = 0.123456789012345678;
    p.F_cond = -3.0000000000000004;
    p.F_norm = -2.9999999999999996;
    p.error_bar = 1e-300;
    return p;
}

fs::path scratch_dir(const char* name) {
    auto d = fs::temp_directory_path() / (std::string("condqpt_io_") + name);
    fs::remove_all(d);
    return d;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("config validation") {
    auto c = sample_config();
    CHECK_NOTHROW(c.validate());
    c.temperatures.clear();
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = sample_config();
    c.tolerances.crossing_rel = 0.0;
    CHECK_THROWS_AS(c.validate(), ValidationError);
    c = sample_config();
    c.model = "ising";
    CHECK_THROWS_AS(c.validate(), ValidationError);
    CHECK_THROWS_AS(RunConfig::from_json("{not json"), ValidationError);
    CHECK_THROWS_AS(RunConfig::from_json(R"({"sizes": "four"})"), ValidationError);
}

TEST_CASE("config JSON round trip and hash") {
    auto c = sample_config();
    c.tail_cutoff = 46.0;
    c.tolerances.crossing_rel = 3e-5;
    const auto back = RunConfig::from_json(c.to_json());
    CHECK(back.controls == c.controls);
    CHECK(back.tail_cutoff == c.tail_cutoff);
    CHECK(back.tolerances.crossing_rel == 3e-5);
    CHECK(back.hash() == c.hash());
    CHECK(c.hash().size() == 16);
    auto moved = c;
    moved.output_dir = "/elsewhere";
    CHECK(moved.hash() == c.hash());
    auto changed = c;
    changed.temperatures = {0.3};
    CHECK(changed.hash() != c.hash());
}

TEST_CASE("empty point list gives a header-only CSV") {
    CHECK(points_csv({}, "abc") == "model,N,Np,Ni,control,temperature,p_cond,F_cond,F_norm,error_bar,config_hash\n");
    CHECK(parse_points_csv(points_csv({}, "abc")).empty());
}

TEST_CASE("one point round-trips bit-identically through CSV and JSON") {
    const auto p = sample_point();
    const auto csv = points_csv({p}, "h");
    CHECK(csv.find('\r') == std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    const auto a = parse_points_csv(csv);
    REQUIRE(a.size() == 1);
    CHECK(a[0] == p);
    const auto j = points_json({p}, sample_config());
    const auto parsed = nlohmann::json::parse(j);
    CHECK(parsed["schema_version"] == kSchemaVersion);
    CHECK(parsed["config"]["sizes"] == nlohmann::json({4, 6}));
    CHECK(parsed["config_hash"] == sample_config().hash());
    const auto b = parse_points_json(j);
    REQUIRE(b.size() == 1);
    CHECK(b[0] == p);
}

TEST_CASE("absent optional fields stay absent") {
    ThermalPoint p;
    p.model = "grover";
    p.N = 7;
    p.p_cond = 0.5;
    const auto back = parse_points_csv(points_csv({p}, "x"));
    CHECK_FALSE(back[0].Np.has_value());
    CHECK_FALSE(back[0].F_cond.has_value());
    CHECK(parse_points_json(points_json({p}, sample_config()))[0] == p);
}

TEST_CASE("invalid points are refused") {
    auto p = sample_point();
    p.p_cond = 1.5;
    CHECK_THROWS_AS(points_csv({p}, "h"), ValidationError);
    p = sample_point();
    p.error_bar = -1.0;
    CHECK_THROWS_AS(points_json({p}, sample_config()), ValidationError);
    CHECK_THROWS_AS(parse_points_csv("a,b\n"), ValidationError);
}

TEST_CASE("compute time never reaches the files") {
    auto p = sample_point(), q = sample_point();
    p.compute_seconds = 1.0;
    q.compute_seconds = 2.0;
    CHECK(points_csv({p}, "h") == points_csv({q}, "h"));
    CHECK(points_json({p}, sample_config()) == points_json({q}, sample_config()));
}

TEST_CASE("crossings CSV") {
    criticality::CrossingRecord r;
    r.size = 6;
    r.control = 2.3879;
    r.temperature = 0.02;
    r.lo = 2.3878;
    r.hi = 2.3880;
    r.tolerance = 2e-4;
    const auto back = parse_crossings_csv(crossings_csv({r, r}));
    REQUIRE(back.size() == 2);
    CHECK(back[1].control == r.control);
    CHECK(back[1].hi == r.hi);
    const auto minimal = parse_crossings_csv("size,control\n4,1.5\n6,2.5\n");
    CHECK(minimal[1].control == 2.5);
    CHECK_THROWS_AS(parse_crossings_csv("n,value\n4,1\n"), ValidationError);
    CHECK_THROWS_AS(parse_crossings_csv("size,control\n4\n"), ValidationError);
}

TEST_CASE("files are written and IO errors carry the path") {
    const auto d = scratch_dir("emit");
    emit_points(d, "pts", {sample_point()}, sample_config());
    CHECK(fs::exists(d / "pts.csv"));
    CHECK(parse_points_json(read_text(d / "pts.json"))[0] == sample_point());
    try {
        (void)read_text(d / "missing.csv");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("missing.csv") != std::string::npos);
    }
    // A regular file where a directory is expected.
    CHECK_THROWS_AS(write_text(d / "pts.csv" / "x.csv", "x"), IoError);
    fs::remove_all(d);
}

TEST_CASE("spectrum cache returns the cold computation bit for bit") {
    const auto d = scratch_dir("cache");
    SpectrumCache cache(d);
    const auto p = fermion::FermionParams::half_filled(6, 3.7, 1.0);
    CHECK_FALSE(cache.load(p).has_value());
    const auto cold = fermion::single_particle_spectrum(p);
    const auto first = cache.spectrum(p);
    const auto hit = cache.load(p);
    REQUIRE(hit.has_value());
    CHECK(hit->values == cold.values);
    CHECK(hit->vectors == cold.vectors);
    CHECK(first.values == cold.values);
    auto other = p;
    other.g = 3.8;
    CHECK(cache.key(other) != cache.key(p));
    fs::remove_all(d);
}

TEST_CASE("cache directory override") {
    ::setenv("CONDQPT_CACHE_DIR", "/tmp/override", 1);
    CHECK(SpectrumCache::resolve_dir("fallback") == fs::path("/tmp/override"));
    ::unsetenv("CONDQPT_CACHE_DIR");
    CHECK(SpectrumCache::resolve_dir("fallback") == fs::path("fallback"));
}

}
