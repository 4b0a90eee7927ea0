#include "wedgefill/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace wedgefill {

namespace {

void put_u32(std::ostream& os, uint32_t x) {
    unsigned char b[4] = {static_cast<unsigned char>(x), static_cast<unsigned char>(x >> 8),
                          static_cast<unsigned char>(x >> 16), static_cast<unsigned char>(x >> 24)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) | (static_cast<uint32_t>(b[2]) << 16) |
           (static_cast<uint32_t>(b[3]) << 24);
}

}  // namespace

void write_binary(const std::string& path, const Array2& a) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("io: cannot open for writing: " + path);
    os.write("TOMO", 4);
    put_u32(os, static_cast<uint32_t>(a.rows));
    put_u32(os, static_cast<uint32_t>(a.cols));
    put_u32(os, 0);  // dtype tag: float32
    for (double x : a.v) {
        float f = static_cast<float>(x);
        uint32_t bits;
        std::memcpy(&bits, &f, 4);
        put_u32(os, bits);
    }
    if (!os) throw ConfigError("io: write failed: " + path);
}

Array2 read_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("io: cannot open: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "TOMO", 4) != 0) throw ConfigError("io: bad magic in " + path);
    const uint32_t rows = get_u32(is), cols = get_u32(is), dtype = get_u32(is);
    if (dtype != 0) throw ConfigError("io: unsupported dtype tag in " + path);
    Array2 a(static_cast<int>(rows), static_cast<int>(cols));
    for (double& x : a.v) {
        uint32_t bits = get_u32(is);
        float f;
        std::memcpy(&f, &bits, 4);
        x = f;
    }
    if (!is) throw ConfigError("io: truncated file: " + path);
    return a;
}

void write_csv(const std::string& path, const Array2& a) {
    std::ofstream os(path);
    if (!os) throw ConfigError("io: cannot open for writing: " + path);
    os.precision(17);
    for (int r = 0; r < a.rows; ++r) {
        for (int c = 0; c < a.cols; ++c) {
            if (c) os << ',';
            os << a(r, c);
        }
        os << '\n';
    }
}

Array2 read_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("io: cannot open: " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size()) throw ConfigError("io: ragged CSV: " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError("io: empty CSV: " + path);
    Array2 a(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
    for (int r = 0; r < a.rows; ++r)
        for (int c = 0; c < a.cols; ++c) a(r, c) = rows[r][c];
    return a;
}

void write_mask_csv(const std::string& path, const SampleMask& m) { write_csv(path, m.flags); }

void write_pgm(const std::string& path, const Array2& a, double* recorded_min, double* recorded_max) {
    const double lo = min_val(a), hi = max_val(a);
    if (recorded_min) *recorded_min = lo;
    if (recorded_max) *recorded_max = hi;
    const double span = hi > lo ? hi - lo : 1.0;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("io: cannot open for writing: " + path);
    os << "P5\n" << a.cols << ' ' << a.rows << "\n255\n";
    for (double x : a.v) {
        int g = static_cast<int>(std::lround(255.0 * (x - lo) / span));
        os.put(static_cast<char>(std::clamp(g, 0, 255)));
    }
}

}  // namespace wedgefill
