#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fracvac/dynamics.hpp"
#include "fracvac/response.hpp"
#include "fracvac/spectrum.hpp"
#include "fracvac/toy_model.hpp"

namespace fracvac {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a column; throws SchemaError naming it when absent.
    std::size_t column(const std::string& name) const;
    std::vector<double> numeric(const std::string& name) const;
};

/// Writes `contents` to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

CsvTable read_csv(const std::filesystem::path& path);

/// 17 significant digits.
std::string format_number(double v);

void write_measure_csv(const std::filesystem::path& path, const SpectralMeasure& m);
SpectralMeasure read_measure_csv(const std::filesystem::path& path);

void write_rate_csv(const std::filesystem::path& path, const RateTrace& r);
RateTrace read_rate_csv(const std::filesystem::path& path);

void write_poles_csv(const std::filesystem::path& path, const PoleSet& poles);
PoleSet read_poles_csv(const std::filesystem::path& path);

/// t,re_u,im_u,abs_u,solver
void write_amplitude_csv(const std::filesystem::path& path, const AmplitudeTrace& trace);
AmplitudeTrace read_amplitude_csv(const std::filesystem::path& path);

/// t,re_u,im_u,abs_u,valid_flag
void write_flagged_amplitude_csv(const std::filesystem::path& path, const AmplitudeTrace& trace,
                                 const std::vector<bool>& valid);

}  // namespace fracvac
