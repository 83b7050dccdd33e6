#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "rslab/cache.hpp"
#include "rslab/config.hpp"
#include "rslab/parallel.hpp"

using namespace rslab;
namespace fs = std::filesystem;

namespace {
struct temp_dir {
    fs::path path;
    temp_dir() {
        path = fs::temp_directory_path() /
               ("rslab_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~temp_dir() { fs::remove_all(path); }
};
}  // namespace

TEST_CASE("tau cache round trip") {
    temp_dir dir;
    auto t = build_tau_table(3000);
    auto file = dir.path / "tau.rst";
    save_tau(file, t);
    auto back = load_tau(file);
    CHECK(back.limit == t.limit);
    for (std::uint64_t n = 1; n <= t.limit; ++n) CHECK(back.tau[n] == t.tau[n]);

    // Re-saving produces byte-identical files.
    auto file2 = dir.path / "tau2.rst";
    save_tau(file2, back);
    std::ifstream a(file, std::ios::binary), b(file2, std::ios::binary);
    std::string sa((std::istreambuf_iterator<char>(a)), {});
    std::string sb((std::istreambuf_iterator<char>(b)), {});
    CHECK(sa == sb);
}

TEST_CASE("coefficient cache round trip") {
    temp_dir dir;
    auto t = build_coefficient_table(build_tau_table(3000));
    auto file = dir.path / "coeffs.rsc";
    save_coefficients(file, t);
    auto back = load_coefficients(file);
    CHECK(back.limit == t.limit);
    for (std::uint64_t n = 1; n <= t.limit; ++n) {
        CHECK(back.lambda[n] == t.lambda[n]);
        CHECK(back.c[n] == t.c[n]);
        CHECK(back.prefix[n] == t.prefix[n]);
    }
}

TEST_CASE("d4 cache round trip") {
    temp_dir dir;
    auto t = build_d4(3000);
    auto file = dir.path / "d4.rsd";
    save_d4(file, t);
    auto back = load_d4(file);
    CHECK(back.limit == t.limit);
    for (std::uint64_t n = 1; n <= t.limit; ++n) {
        CHECK(back.d4[n] == t.d4[n]);
        CHECK(back.prefix[n] == t.prefix[n]);
    }
}

TEST_CASE("cache corruption is reported distinctly") {
    temp_dir dir;
    auto t = build_tau_table(100);
    auto file = dir.path / "tau.rst";
    save_tau(file, t);

    CHECK_THROWS_AS(load_tau(dir.path / "missing.rst"), cache_error);
    CHECK_THROWS_AS(load_coefficients(file), cache_error);  // wrong magic

    // Truncated payload.
    auto truncated = dir.path / "short.rst";
    {
        std::ifstream in(file, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), {});
        std::ofstream out(truncated, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 16));
    }
    CHECK_THROWS_AS(load_tau(truncated), cache_error);

    // Corrupted magic.
    auto bad = dir.path / "bad.rst";
    {
        std::ifstream in(file, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), {});
        bytes[0] = 'X';
        std::ofstream out(bad, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    CHECK_THROWS_AS(load_tau(bad), cache_error);
}

TEST_CASE("config defaults and file parsing") {
    auto cfg = run_config::defaults();
    cfg.validate();
    CHECK(cfg.table_limit == 1'000'000);
    CHECK(cfg.window_for("delta1_m4_slope").lo == 5.3);
    CHECK_THROWS_AS(cfg.window_for("nonexistent"), std::invalid_argument);

    temp_dir dir;
    auto file = dir.path / "run.conf";
    {
        std::ofstream out(file);
        out << "# comment line\n";
        out << "table_limit = 50000\n";
        out << "cache_dir = /tmp/somewhere\n";
        out << "thread_count = 4\n";
        out << "output_format = json\n";
        out << "window.custom_check = -1.5, 2.5\n";
    }
    auto loaded = load_config(file);
    CHECK(loaded.table_limit == 50'000);
    CHECK(loaded.cache_dir == "/tmp/somewhere");
    CHECK(loaded.thread_count == 4);
    CHECK(loaded.output_format == "json");
    CHECK(loaded.window_for("custom_check").lo == -1.5);
    CHECK(loaded.window_for("custom_check").hi == 2.5);
    // defaults survive underneath overrides
    CHECK(loaded.window_for("delta_m4_slope").hi == 3.1);

    run_config cfg2 = run_config::defaults();
    CHECK_THROWS_AS(apply_override(cfg2, "unknown_key", "1"), std::invalid_argument);
    CHECK_THROWS_AS(apply_override(cfg2, "window.bad", "5, 1"), std::invalid_argument);
    CHECK_THROWS_AS(apply_override(cfg2, "output_format", "xml"), std::invalid_argument);
}

TEST_CASE("thread resolution honors the environment override") {
    unsetenv("RSLAB_THREADS");
    CHECK(resolve_threads(3) == 3);
    CHECK(resolve_threads(0) >= 1);
    setenv("RSLAB_THREADS", "7", 1);
    CHECK(resolve_threads(3) == 7);
    CHECK(resolve_threads(0) == 7);
    setenv("RSLAB_THREADS", "garbage", 1);
    CHECK(resolve_threads(2) == 2);
    unsetenv("RSLAB_THREADS");
}

TEST_CASE("window semantics") {
    window w{1.0, 2.0};
    CHECK(w.contains(1.0));
    CHECK(w.contains(2.0));
    CHECK(!w.contains(0.999));
    CHECK(!w.contains(2.001));
}
