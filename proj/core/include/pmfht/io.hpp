#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pmfht/radar.hpp"
#include "pmfht/transform.hpp"
#include "pmfht/types.hpp"

namespace pmfht {

/// Reads .xyz (whitespace-separated triples, '#' comments) or ascii .ply
/// (vertex element with float x/y/z properties), dispatched on extension.
/// Parse failures carry the line number.
PointCloud read_cloud(const std::string& path);
PointCloud read_xyz(std::istream& in, const std::string& name = "<xyz>");
PointCloud read_ply(std::istream& in, const std::string& name = "<ply>");

void write_xyz(const std::string& path, const PointCloud& cloud);

/// CSV with header index,re_*,im_*,mag_* per channel (x/y/z names when there
/// are exactly three channels) plus a trailing fused magnitude column
/// sqrt(sum_c |coeff_c|^2) when multichannel. 17 significant digits.
void write_spectrum_csv(const std::string& path, const FractionalSpectrum& spectrum);

/// Two-column CSV at 17 significant digits.
void write_curve_csv(const std::string& path, const std::string& x_name,
                     const std::string& y_name, const std::vector<double>& xs,
                     const std::vector<double>& ys);

/// Radar cube ingest. Data file: .csv with R lines of 2M comma-separated
/// floats (re,im pairs) or .bin with 2 R M little-endian doubles, row-major.
/// The sidecar JSON names range_cells, pulses, prf_hz, wavelength_m.
RadarCube read_cube(const std::string& data_path, const std::string& sidecar_path);
void write_cube(const std::string& data_path, const std::string& sidecar_path,
                const RadarCube& cube);

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_g17(double value);

}  // namespace pmfht
