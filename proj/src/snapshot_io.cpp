#include "ckn/snapshot_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <memory>

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; byte swapping is not implemented");

namespace ckn {

namespace {

constexpr char kMagic[4] = {'C', 'K', 'N', 'F'};
constexpr std::uint32_t kVersion = 1;

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_bytes(std::FILE* f, const void* p, std::size_t n, const std::string& path) {
    if (std::fwrite(p, 1, n, f) != n) throw IoError("snapshot write failed: " + path);
}

void read_bytes(std::FILE* f, void* p, std::size_t n, const std::string& path,
                long offset) {
    if (std::fread(p, 1, n, f) != n)
        throw IoError("snapshot truncated at byte offset " + std::to_string(offset) +
                      ": " + path);
}

} // namespace

void write_snapshot(const FieldSnapshot& s, const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "wb"));
    if (!f) throw IoError("cannot open for writing: " + path);
    write_bytes(f.get(), kMagic, 4, path);
    write_bytes(f.get(), &kVersion, 4, path);
    const std::uint32_t n = static_cast<std::uint32_t>(s.grid.n);
    write_bytes(f.get(), &n, 4, path);
    write_bytes(f.get(), &s.grid.box, 8, path);
    write_bytes(f.get(), &s.time, 8, path);
    const std::size_t cells = s.grid.cells();
    for (int d = 0; d < 3; ++d)
        write_bytes(f.get(), s.velocity.c[d].data(), cells * 8, path);
    write_bytes(f.get(), s.pressure.v.data(), cells * 8, path);
    if (std::fflush(f.get()) != 0) throw IoError("snapshot flush failed: " + path);
}

FieldSnapshot read_snapshot(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "rb"));
    if (!f) throw IoError("cannot open for reading: " + path);
    char magic[4];
    read_bytes(f.get(), magic, 4, path, 0);
    if (magic[0] != 'C' || magic[1] != 'K' || magic[2] != 'N' || magic[3] != 'F')
        throw IoError("bad magic at byte offset 0 (expected CKNF): " + path);
    std::uint32_t version = 0, n = 0;
    read_bytes(f.get(), &version, 4, path, 4);
    if (version != kVersion)
        throw IoError("unsupported format version " + std::to_string(version) +
                      " at byte offset 4: " + path);
    read_bytes(f.get(), &n, 4, path, 8);
    if (n < 8 || n % 2 != 0 || n > 4096)
        throw IoError("implausible n_per_axis " + std::to_string(n) +
                      " at byte offset 8: " + path);
    double box = 0.0, time = 0.0;
    read_bytes(f.get(), &box, 8, path, 12);
    read_bytes(f.get(), &time, 8, path, 20);
    if (!(box > 0.0))
        throw IoError("non-positive box_length at byte offset 12: " + path);

    TorusGrid g(static_cast<int>(n), box);
    VectorLattice u(g);
    long offset = 28;
    const std::size_t cells = g.cells();
    for (int d = 0; d < 3; ++d) {
        read_bytes(f.get(), u.c[d].data(), cells * 8, path, offset);
        offset += static_cast<long>(cells * 8);
    }
    ScalarLattice pi(g);
    read_bytes(f.get(), pi.v.data(), cells * 8, path, offset);
    // Trailing garbage would mean the header lied about the payload size.
    char extra;
    if (std::fread(&extra, 1, 1, f.get()) == 1)
        throw IoError("unexpected trailing bytes after payload: " + path);
    return FieldSnapshot::unchecked(g, time, std::move(u), std::move(pi));
}

} // namespace ckn
