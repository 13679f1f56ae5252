#pragma once

#include <memory>
#include <string>
#include <vector>

#include "thinfilm/grid.hpp"

namespace thinfilm {

/// MFD1 field dump: magic "MFD1", a 4-byte little-endian header length, a
/// JSON header {n, side_length, components, layout, dtype} and the raw
/// float64 little-endian payload (row-major within a component, components
/// back to back). Round-trips are bit exact.
struct FieldDump {
    TorusGrid grid{4, 1.0};
    std::vector<ScalarField> components;
};

void write_mfd1(const std::string& path, const FieldDump& dump);
void write_mfd1(const std::string& path, const ScalarField& f);
void write_mfd1(const std::string& path, const VectorField& v);

FieldDump read_mfd1(const std::string& path);
/// Reads a 3-component dump and validates the unit-norm invariant.
Magnetization read_mfd1_magnetization(const std::string& path);

/// CSV writer with lossless float formatting (17 significant digits).
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void header(const std::vector<std::string>& names);
    void cell(double v);
    void cell(long v);
    void cell(std::size_t v);
    void cell(const std::string& v);
    void end_row();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// %.17g rendering used everywhere numbers hit disk.
std::string format_double(double v);

}  // namespace thinfilm
