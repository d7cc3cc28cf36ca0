#include "eqvidx/index_reports.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace eqvidx;
namespace fs = std::filesystem;

TEST_CASE("reports are deterministic: identical config gives identical JSON") {
    Config cfg;
    cfg.no_cache = true;
    const IndexReport a = hsiang_report(2, cfg);
    const IndexReport b = hsiang_report(2, cfg);
    CHECK(a.to_json(false) == b.to_json(false));
    CHECK(a.pass);
}

TEST_CASE("report JSON parses and keeps the schema field names") {
    Config cfg;
    cfg.no_cache = true;
    const IndexReport rep = hsiang_report(1, cfg);
    const nlohmann::json j = nlohmann::json::parse(rep.to_json(true));
    for (const char* key :
         {"family", "parameter", "eigenvalues", "counts", "bounds", "residuals", "mesh",
          "verdicts", "version", "timing"})
        CHECK(j.contains(key));
    CHECK(j["family"] == "hsiang");
    CHECK(j["parameter"] == 1);
    CHECK(j["version"] == "1");
    CHECK(j["eigenvalues"].is_array());
    CHECK(j["verdicts"].is_object());
    // floats survive a parse/serialize cycle at full precision
    const double e0 = j["eigenvalues"][0].get<double>();
    CHECK(e0 == doctest::Approx(-3.0).epsilon(1e-6));
}

TEST_CASE("curve cache: warm runs reproduce cold runs byte for byte") {
    const fs::path dir = fs::temp_directory_path() / "eqvidx_cache_test";
    fs::remove_all(dir);
    Config cfg;
    cfg.cache_dir = dir.string();

    CurveStore cold(cfg);
    const IndexReport a = hsiang_report(1, cfg, &cold);
    CHECK(fs::exists(dir)); // cache populated

    CurveStore warm(cfg);
    const IndexReport b = hsiang_report(1, cfg, &warm);
    CHECK(a.to_json(false) == b.to_json(false));
    fs::remove_all(dir);
}

TEST_CASE("config files: parsing, precedence and unknown keys") {
    const fs::path path = fs::temp_directory_path() / "eqvidx_test_config";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "tol = 1e-10\n";
        out << "mesh=256\n";
        out << "max_m = 4  # trailing comment\n";
        out << "quick=true\n";
    }
    Config cfg = apply_config_file(Config{}, path.string());
    CHECK(cfg.tol == 1e-10);
    CHECK(cfg.mesh == 256);
    CHECK(cfg.max_m == 4);
    CHECK(cfg.quick);
    {
        std::ofstream out(path);
        out << "bogus_key = 1\n";
    }
    CHECK_THROWS_AS(apply_config_file(Config{}, path.string()), std::invalid_argument);
    fs::remove(path);
    CHECK_THROWS_AS(apply_config_file(Config{}, "/nonexistent/path/cfg"), std::invalid_argument);
}

TEST_CASE("cache directory resolution order") {
    Config cfg;
    cfg.cache_dir = "/explicit";
    CHECK(cfg.resolved_cache_dir() == "/explicit");
    cfg.cache_dir.clear();
    ::setenv("EQVIDX_CACHE", "/from_env", 1);
    CHECK(cfg.resolved_cache_dir() == "/from_env");
    ::unsetenv("EQVIDX_CACHE");
    CHECK(cfg.resolved_cache_dir() == "./.eqvidx-cache");
}

TEST_CASE("fbms report: ell = 1 verdicts") {
    Config cfg;
    cfg.no_cache = true;
    const IndexReport rep = fbms_report(1, cfg);
    CHECK(rep.pass);
    CHECK(rep.count("witness_nodal_domains") == 1);
    CHECK(rep.count("dirichlet_strict_negative") == 0);
    CHECK(rep.count("robin_negative_count") >= 1);
    CHECK(std::abs(rep.residual("dirichlet_zero_value")) <= 1e-5);
    CHECK(rep.bound("equivariant_index_lower") == 1);
}

TEST_CASE("hsiang report: m = 2 counts and the assembled bounds") {
    Config cfg;
    cfg.no_cache = true;
    const IndexReport rep = hsiang_report(2, cfg);
    CHECK(rep.pass);
    CHECK(rep.count("strict_below_minus3") == 1);
    CHECK(rep.count("multiplicity_at_minus3") == 1);
    CHECK(rep.bound("equivariant_index_lower") == 2);
    CHECK(rep.bound("total_index_lower") == 6);
    CHECK(rep.bound("mr_lower_scuts") == 1);
    CHECK(rep.bound("mr_upper_tcuts") == 2);
    // the Clifford-product reference spectrum is attached for comparison
    bool has_ref = false;
    for (const auto& [k, v] : rep.extras)
        if (k == "clifford_product_reference") {
            has_ref = true;
            REQUIRE(v.size() == 4);
            CHECK(v[0] == -6.0);
            CHECK(v[1] == -3.0);
        }
    CHECK(has_ref);
}
