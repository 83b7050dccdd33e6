#include "rslab/cache.hpp"

#include <cstring>
#include <fstream>

#include "rslab/errors.hpp"

namespace rslab {

namespace {

void write_u64(std::ofstream& out, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64(std::ifstream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

void write_doubles(std::ofstream& out, const double* data, std::uint64_t count) {
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, &data[i], 8);
        write_u64(out, bits);
    }
}

void read_doubles(std::ifstream& in, double* data, std::uint64_t count) {
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint64_t bits = read_u64(in);
        std::memcpy(&data[i], &bits, 8);
    }
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw cache_error("cache: cannot open " + path.string() + " for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& path, const char magic[4]) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cache_error("cache: cannot open " + path.string());
    char got[4];
    in.read(got, 4);
    if (!in || std::memcmp(got, magic, 4) != 0)
        throw cache_error("cache: bad magic in " + path.string());
    return in;
}

void check_size(const std::filesystem::path& path, std::uint64_t expected) {
    if (std::filesystem::file_size(path) != expected)
        throw cache_error("cache: length mismatch in " + path.string());
}

}  // namespace

void save_tau(const std::filesystem::path& path, const tau_table& table) {
    auto out = open_out(path);
    out.write("RST1", 4);
    write_u64(out, table.limit);
    for (std::uint64_t n = 1; n <= table.limit; ++n) {
        auto u = static_cast<uint128>(table.tau[n]);
        write_u64(out, static_cast<std::uint64_t>(u));
        write_u64(out, static_cast<std::uint64_t>(u >> 64));
    }
    if (!out) throw cache_error("cache: write failure on " + path.string());
}

tau_table load_tau(const std::filesystem::path& path) {
    auto in = open_in(path, "RST1");
    std::uint64_t limit = read_u64(in);
    check_size(path, 12 + 16 * limit);
    tau_table t;
    t.limit = limit;
    t.tau.assign(limit + 1, 0);
    for (std::uint64_t n = 1; n <= limit; ++n) {
        std::uint64_t lo = read_u64(in);
        std::uint64_t hi = read_u64(in);
        t.tau[n] = static_cast<int128>((static_cast<uint128>(hi) << 64) | lo);
    }
    if (!in) throw cache_error("cache: truncated read from " + path.string());
    return t;
}

void save_coefficients(const std::filesystem::path& path, const coefficient_table& table) {
    auto out = open_out(path);
    out.write("RSC1", 4);
    write_u64(out, table.limit);
    write_doubles(out, table.lambda.data() + 1, table.limit);
    write_doubles(out, table.c.data() + 1, table.limit);
    write_doubles(out, table.prefix.data() + 1, table.limit);
    if (!out) throw cache_error("cache: write failure on " + path.string());
}

coefficient_table load_coefficients(const std::filesystem::path& path) {
    auto in = open_in(path, "RSC1");
    std::uint64_t limit = read_u64(in);
    check_size(path, 12 + 3 * 8 * limit);
    coefficient_table t;
    t.limit = limit;
    t.lambda.assign(limit + 1, 0.0);
    t.c.assign(limit + 1, 0.0);
    t.prefix.assign(limit + 1, 0.0);
    read_doubles(in, t.lambda.data() + 1, limit);
    read_doubles(in, t.c.data() + 1, limit);
    read_doubles(in, t.prefix.data() + 1, limit);
    if (!in) throw cache_error("cache: truncated read from " + path.string());
    return t;
}

void save_d4(const std::filesystem::path& path, const d4_table& table) {
    auto out = open_out(path);
    out.write("RSD4", 4);
    write_u64(out, table.limit);
    for (std::uint64_t n = 1; n <= table.limit; ++n) write_u64(out, table.d4[n]);
    write_doubles(out, table.prefix.data() + 1, table.limit);
    if (!out) throw cache_error("cache: write failure on " + path.string());
}

d4_table load_d4(const std::filesystem::path& path) {
    auto in = open_in(path, "RSD4");
    std::uint64_t limit = read_u64(in);
    check_size(path, 12 + 2 * 8 * limit);
    d4_table t;
    t.limit = limit;
    t.d4.assign(limit + 1, 0);
    for (std::uint64_t n = 1; n <= limit; ++n) t.d4[n] = read_u64(in);
    t.prefix.assign(limit + 1, 0.0);
    read_doubles(in, t.prefix.data() + 1, limit);
    if (!in) throw cache_error("cache: truncated read from " + path.string());
    return t;
}

}  // namespace rslab
