#pragma once

#include "varns/field.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace varns::io {

/// Shortest round-trip decimal representation of a double.
std::string format_real(double v);

/// Field snapshot CSV: header `axis0,axis1[,axis2],t,value`, one row per node,
/// time-major then axis0-major.
void write_field_csv(const std::filesystem::path& path, const ScalarField& f);
/// Reads a snapshot written for `grid`; coordinates are checked against it.
ScalarField read_field_csv(const std::filesystem::path& path, const Grid& grid);

/// Writes u0.., p, w0.., r as snapshot files into `dir`.
void write_quartet(const std::filesystem::path& dir, const FieldQuartet& q);
FieldQuartet read_quartet(const std::filesystem::path& dir, const Grid& grid);

/// Minimal CSV table writer with a fixed header.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    void add_row(const std::vector<std::string>& cells);
    void add_row(const std::vector<double>& cells);
    void write(const std::filesystem::path& path) const;
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace varns::io
