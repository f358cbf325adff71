#include "fracvac/io.hpp"

#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fracvac/error.hpp"

namespace fracvac {

namespace fs = std::filesystem;

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw SchemaError(name, "missing column '" + name + "'");
}

std::vector<double> CsvTable::numeric(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::string& cell = rows[r][c];
        errno = 0;
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (cell.empty() || end != cell.c_str() + cell.size() || errno == ERANGE)
            throw SchemaError(name, "column '" + name + "' row " + std::to_string(r + 1) +
                                        ": not a number: '" + cell + "'");
        out.push_back(v);
    }
    return out;
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
        out << contents;
        out.flush();
        if (!out) throw IoError("failed writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot move output into place at '" + path.string() + "'");
    }
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r')) cell.pop_back();
        std::size_t s = 0;
        while (s < cell.size() && cell[s] == ' ') ++s;
        out.push_back(cell.substr(s));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void expect_header(const CsvTable& t, const std::vector<std::string>& names) {
    for (const auto& n : names) t.column(n);
}

}  // namespace

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw IoError("'" + path.string() + "' is empty");
    t.header = split(line);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto row = split(line);
        if (row.size() != t.header.size())
            throw IoError("'" + path.string() + "' line " + std::to_string(lineno) + ": expected " +
                          std::to_string(t.header.size()) + " fields");
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_measure_csv(const fs::path& path, const SpectralMeasure& m) {
    std::string s = "omega,weight\n";
    for (std::size_t k = 0; k < m.size(); ++k)
        s += format_number(m.frequencies()[k]) + "," + format_number(m.weights()[k]) + "\n";
    write_file_atomic(path, s);
}

SpectralMeasure read_measure_csv(const fs::path& path) {
    const CsvTable t = read_csv(path);
    expect_header(t, {"omega", "weight"});
    return SpectralMeasure(t.numeric("omega"), t.numeric("weight"));
}

void write_rate_csv(const fs::path& path, const RateTrace& r) {
    std::string s = "t,gamma,cumulative\n";
    for (std::size_t i = 0; i < r.times.size(); ++i)
        s += format_number(r.times[i]) + "," + format_number(r.gamma[i]) + "," +
             format_number(r.cumulative[i]) + "\n";
    write_file_atomic(path, s);
}

RateTrace read_rate_csv(const fs::path& path) {
    const CsvTable t = read_csv(path);
    expect_header(t, {"t", "gamma", "cumulative"});
    return {t.numeric("t"), t.numeric("gamma"), t.numeric("cumulative")};
}

void write_poles_csv(const fs::path& path, const PoleSet& poles) {
    std::string s = "n,re_s,im_s,residual\n";
    for (const auto& p : poles.poles) {
        if (!p.usable()) continue;
        s += std::to_string(p.n) + "," + format_number(p.s.real()) + "," + format_number(p.s.imag()) +
             "," + format_number(p.residual) + "\n";
    }
    write_file_atomic(path, s);
}

PoleSet read_poles_csv(const fs::path& path) {
    const CsvTable t = read_csv(path);
    expect_header(t, {"n", "re_s", "im_s", "residual"});
    const auto n = t.numeric("n"), re = t.numeric("re_s"), im = t.numeric("im_s"),
               res = t.numeric("residual");
    PoleSet set;
    for (std::size_t i = 0; i < n.size(); ++i) {
        Pole p;
        p.n = static_cast<int>(std::lround(n[i]));
        p.s = p.seed = cplx(re[i], im[i]);
        p.residual = res[i];
        p.status = res[i] < 1e-10 ? PoleStatus::converged : PoleStatus::seed;
        set.poles.push_back(p);
    }
    return set;
}

void write_amplitude_csv(const fs::path& path, const AmplitudeTrace& trace) {
    std::string s = "t,re_u,im_u,abs_u,solver\n";
    const std::string tag = to_string(trace.solver);
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        const cplx u = trace.amplitude[i];
        s += format_number(trace.times[i]) + "," + format_number(u.real()) + "," +
             format_number(u.imag()) + "," + format_number(std::abs(u)) + "," + tag + "\n";
    }
    write_file_atomic(path, s);
}

AmplitudeTrace read_amplitude_csv(const fs::path& path) {
    const CsvTable t = read_csv(path);
    expect_header(t, {"t", "re_u", "im_u"});
    AmplitudeTrace tr;
    tr.times = t.numeric("t");
    const auto re = t.numeric("re_u"), im = t.numeric("im_u");
    for (std::size_t i = 0; i < re.size(); ++i) tr.amplitude.emplace_back(re[i], im[i]);
    tr.solver = SolverTag::pole_sum;
    for (const auto& h : t.header)
        if (h == "solver" && !t.rows.empty()) tr.solver = solver_from_string(t.rows[0][t.column("solver")]);
    return tr;
}

void write_flagged_amplitude_csv(const fs::path& path, const AmplitudeTrace& trace,
                                 const std::vector<bool>& valid) {
    if (valid.size() != trace.times.size())
        throw InvalidArgument("write_flagged_amplitude_csv: flag count mismatch");
    std::string s = "t,re_u,im_u,abs_u,valid_flag\n";
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        const cplx u = trace.amplitude[i];
        s += format_number(trace.times[i]) + "," + format_number(u.real()) + "," +
             format_number(u.imag()) + "," + format_number(std::abs(u)) + "," +
             (valid[i] ? "1" : "0") + "\n";
    }
    write_file_atomic(path, s);
}

}  // namespace fracvac
