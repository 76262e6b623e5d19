#include "varns/io.hpp"

#include "varns/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace varns::io {

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

double parse_real(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw DomainError("trailing characters in number '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw DomainError("malformed number '" + s + "'");
    }
}

} // namespace

void write_field_csv(const std::filesystem::path& path, const ScalarField& f) {
    const Grid& g = f.grid();
    auto out = open_out(path);
    for (int a = 0; a < g.dim(); ++a) out << "axis" << a << ',';
    out << "t,value\n";
    for (int k = 0; k < g.time_nodes(); ++k) {
        for (std::size_t s = 0; s < g.space_size(); ++s) {
            const auto idx = g.space_multi_index(s);
            for (int a = 0; a < g.dim(); ++a) out << format_real(g.coordinate(a, idx[a])) << ',';
            out << format_real(g.time(k)) << ',' << format_real(f.at(s, k)) << '\n';
        }
    }
}

ScalarField read_field_csv(const std::filesystem::path& path, const Grid& g) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path.string());
    std::string line;
    std::getline(in, line);
    std::string expected;
    for (int a = 0; a < g.dim(); ++a) expected += "axis" + std::to_string(a) + ",";
    expected += "t,value";
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected)
        throw DomainError(path.string() + ": header '" + line + "', expected '" + expected + "'");
    ScalarField f(g);
    const double tol = 1e-9;
    for (int k = 0; k < g.time_nodes(); ++k) {
        for (std::size_t s = 0; s < g.space_size(); ++s) {
            if (!std::getline(in, line))
                throw DomainError(path.string() + ": fewer rows than grid nodes");
            std::stringstream ss(line);
            std::string cell;
            std::vector<double> cells;
            while (std::getline(ss, cell, ',')) cells.push_back(parse_real(cell));
            if (static_cast<int>(cells.size()) != g.dim() + 2)
                throw DomainError(path.string() + ": wrong column count");
            const auto idx = g.space_multi_index(s);
            for (int a = 0; a < g.dim(); ++a)
                if (std::abs(cells[a] - g.coordinate(a, idx[a])) > tol * (1.0 + g.extent(a)))
                    throw DomainError(path.string() + ": node coordinates do not match the grid");
            if (std::abs(cells[g.dim()] - g.time(k)) > tol * (1.0 + g.tau()))
                throw DomainError(path.string() + ": time coordinates do not match the grid");
            f.at(s, k) = cells.back();
        }
    }
    return f;
}

void write_quartet(const std::filesystem::path& dir, const FieldQuartet& q) {
    for (int i = 0; i < q.u.dim(); ++i) {
        write_field_csv(dir / ("u" + std::to_string(i) + ".csv"), q.u[i]);
        write_field_csv(dir / ("w" + std::to_string(i) + ".csv"), q.w[i]);
    }
    write_field_csv(dir / "p.csv", q.p);
    write_field_csv(dir / "r.csv", q.r);
}

FieldQuartet read_quartet(const std::filesystem::path& dir, const Grid& g) {
    std::vector<ScalarField> u, w;
    for (int i = 0; i < g.dim(); ++i) {
        u.push_back(read_field_csv(dir / ("u" + std::to_string(i) + ".csv"), g));
        w.push_back(read_field_csv(dir / ("w" + std::to_string(i) + ".csv"), g));
    }
    return {VectorField(std::move(u)), read_field_csv(dir / "p.csv", g), VectorField(std::move(w)),
            read_field_csv(dir / "r.csv", g)};
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size()) throw DomainError("row width does not match CSV header");
    rows_.push_back(cells);
}

void CsvTable::add_row(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double v : cells) s.push_back(format_real(v));
    add_row(s);
}

std::string CsvTable::str() const {
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    };
    emit(header_);
    for (const auto& r : rows_) emit(r);
    return out.str();
}

void CsvTable::write(const std::filesystem::path& path) const {
    auto out = open_out(path);
    out << str();
}

} // namespace varns::io
