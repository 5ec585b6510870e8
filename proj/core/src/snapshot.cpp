#include "vplk/snapshot.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>

#include "vplk/errors.hpp"

namespace vplk {

namespace {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("snapshot: unexpected end of file");
    return v;
}

std::size_t expected_size(const PhaseGrid& g, SnapshotField::Kind k) {
    switch (k) {
        case SnapshotField::Kind::dist: return g.size();
        case SnapshotField::Kind::spatial: return g.nx_total();
        case SnapshotField::Kind::scalar: return 1;
    }
    throw std::runtime_error("snapshot: bad field kind");
}

}  // namespace

void Snapshot::add(const std::string& name, const DistField& f) {
    require_same_grid(grid_, f.grid(), "Snapshot::add");
    fields_.push_back({name, SnapshotField::Kind::dist, f.values()});
}

void Snapshot::add(const std::string& name, const SpatialField& f) {
    require_same_grid(grid_, f.grid(), "Snapshot::add");
    fields_.push_back({name, SnapshotField::Kind::spatial, f.values()});
}

void Snapshot::add(const std::string& name, double value) {
    fields_.push_back({name, SnapshotField::Kind::scalar, {value}});
}

bool Snapshot::has(const std::string& name) const {
    for (const auto& f : fields_)
        if (f.name == name) return true;
    return false;
}

const SnapshotField& Snapshot::find(const std::string& name, SnapshotField::Kind kind) const {
    for (const auto& f : fields_)
        if (f.name == name) {
            if (f.kind != kind) throw PreconditionError("snapshot field '" + name + "' has a different kind");
            return f;
        }
    throw PreconditionError("snapshot has no field '" + name + "'");
}

DistField Snapshot::dist(const std::string& name) const {
    return DistField(grid_, find(name, SnapshotField::Kind::dist).data);
}

SpatialField Snapshot::spatial(const std::string& name) const {
    return SpatialField(grid_, find(name, SnapshotField::Kind::spatial).data);
}

double Snapshot::scalar(const std::string& name) const { return find(name, SnapshotField::Kind::scalar).data.at(0); }

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    const auto& g = snap.grid();
    os.write("VPLK", 4);
    put<std::uint32_t>(os, Snapshot::version);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim_x));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.n_x));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.n_v));
    put<double>(os, g.v_max);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(snap.fields().size()));
    for (const auto& f : snap.fields()) {
        put<std::uint32_t>(os, static_cast<std::uint32_t>(f.name.size()));
        os.write(f.name.data(), static_cast<std::streamsize>(f.name.size()));
        put<std::uint8_t>(os, static_cast<std::uint8_t>(f.kind));
    }
    for (const auto& f : snap.fields())
        os.write(reinterpret_cast<const char*>(f.data.data()), static_cast<std::streamsize>(f.data.size() * sizeof(double)));
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "VPLK", 4) != 0) throw std::runtime_error(path.string() + ": not a VPLK snapshot");
    const auto version = get<std::uint32_t>(is);
    if (version != Snapshot::version) throw std::runtime_error(path.string() + ": unsupported snapshot version");
    const auto dim_x = get<std::uint32_t>(is);
    const auto n_x = get<std::uint32_t>(is);
    const auto n_v = get<std::uint32_t>(is);
    const auto v_max = get<double>(is);
    const PhaseGrid g = make_grid(static_cast<int>(dim_x), static_cast<int>(n_x), static_cast<int>(n_v), v_max);
    const auto count = get<std::uint32_t>(is);
    std::vector<SnapshotField> fields(count);
    for (auto& f : fields) {
        const auto len = get<std::uint32_t>(is);
        if (len > 4096) throw std::runtime_error("snapshot: implausible field name length");
        f.name.resize(len);
        is.read(f.name.data(), len);
        const auto kind = get<std::uint8_t>(is);
        if (kind > 2) throw std::runtime_error("snapshot: bad field kind");
        f.kind = static_cast<SnapshotField::Kind>(kind);
    }
    Snapshot snap(g);
    for (auto& f : fields) {
        f.data.resize(expected_size(g, f.kind));
        is.read(reinterpret_cast<char*>(f.data.data()), static_cast<std::streamsize>(f.data.size() * sizeof(double)));
        if (!is) throw std::runtime_error("snapshot: truncated data for '" + f.name + "'");
        switch (f.kind) {
            case SnapshotField::Kind::dist: snap.add(f.name, DistField(g, std::move(f.data))); break;
            case SnapshotField::Kind::spatial: snap.add(f.name, SpatialField(g, std::move(f.data))); break;
            case SnapshotField::Kind::scalar: snap.add(f.name, f.data[0]); break;
        }
    }
    return snap;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> columns) : out_(out), ncols_(columns.size()) {
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != ncols_) throw std::logic_error("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
    out_ << '\n';
}

void write_moments_csv(std::ostream& out, const DistField& f) {
    const auto& g = f.grid();
    std::vector<std::string> cols;
    for (int d = 0; d < g.dim_x; ++d) cols.push_back("x" + std::to_string(d));
    for (const char* c : {"mass", "p1", "p2", "p3"}) cols.emplace_back(c);
    CsvWriter w(out, cols);
    const auto m = moments(f);
    for (std::size_t ix = 0; ix < g.nx_total(); ++ix) {
        std::vector<double> row;
        const Vec3 x = g.x3(ix);
        for (int d = 0; d < g.dim_x; ++d) row.push_back(x[d]);
        row.push_back(m.mass[ix]);
        for (int d = 0; d < 3; ++d) row.push_back(m.momentum[static_cast<std::size_t>(d)][ix]);
        w.row(row);
    }
}

}  // namespace vplk
