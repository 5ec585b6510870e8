#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "vplk/phase_space.hpp"

namespace vplk {

// Binary layout, all little endian:
//   "VPLK" | u32 version | u32 dim_x | u32 n_x | u32 n_v | f64 v_max | u32 field_count
//   per field: u32 name_length | name bytes | u8 kind (0 dist, 1 spatial, 2 scalar)
//   then, per field in the same order: f64 values (x-outer, v-inner)
struct SnapshotField {
    enum class Kind : std::uint8_t { dist = 0, spatial = 1, scalar = 2 };
    std::string name;
    Kind kind = Kind::scalar;
    std::vector<double> data;
};

class Snapshot {
public:
    Snapshot() = default;
    explicit Snapshot(const PhaseGrid& grid) : grid_(grid) {}

    const PhaseGrid& grid() const { return grid_; }
    const std::vector<SnapshotField>& fields() const { return fields_; }

    void add(const std::string& name, const DistField& f);
    void add(const std::string& name, const SpatialField& f);
    void add(const std::string& name, double value);

    bool has(const std::string& name) const;
    DistField dist(const std::string& name) const;
    SpatialField spatial(const std::string& name) const;
    double scalar(const std::string& name) const;

    static constexpr std::uint32_t version = 1;

private:
    const SnapshotField& find(const std::string& name, SnapshotField::Kind kind) const;
    PhaseGrid grid_{};
    std::vector<SnapshotField> fields_;
};

void write_snapshot(const std::filesystem::path& path, const Snapshot& snap);
Snapshot read_snapshot(const std::filesystem::path& path);

// Shortest round-trip decimal; infinities print as "inf" / "-inf".
std::string format_number(double x);

class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> columns);
    void row(const std::vector<double>& values);

private:
    std::ostream& out_;
    std::size_t ncols_;
};

// Columns: x0[,x1,x2], mass, p1, p2, p3
void write_moments_csv(std::ostream& out, const DistField& f);

}  // namespace vplk
