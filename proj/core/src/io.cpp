#include "pmfht/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pmfht {

namespace {

std::string lower_ext(const std::string& path) {
  const size_t dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

[[noreturn]] void parse_fail(const std::string& name, int line, const std::string& what) {
  throw ParseError(name + ":" + std::to_string(line) + ": " + what);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

}  // namespace

std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

PointCloud read_xyz(std::istream& in, const std::string& name) {
  std::vector<double> coords;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double x, y, z;
    if (!(row >> x)) continue;  // blank or comment-only line
    if (!(row >> y >> z)) parse_fail(name, lineno, "expected three coordinates");
    double extra;
    if (row >> extra) parse_fail(name, lineno, "more than three fields");
    coords.push_back(x);
    coords.push_back(y);
    coords.push_back(z);
  }
  PointCloud cloud;
  cloud.pts.resize(static_cast<Eigen::Index>(coords.size() / 3), 3);
  for (Eigen::Index i = 0; i < cloud.pts.rows(); ++i) {
    cloud.pts(i, 0) = coords[3 * i];
    cloud.pts(i, 1) = coords[3 * i + 1];
    cloud.pts(i, 2) = coords[3 * i + 2];
  }
  validate_cloud(cloud);
  return cloud;
}

PointCloud read_ply(std::istream& in, const std::string& name) {
  std::string line;
  int lineno = 0;
  auto next_line = [&]() {
    if (!std::getline(in, line)) parse_fail(name, lineno, "unexpected end of file");
    ++lineno;
  };

  next_line();
  if (line != "ply" && line != "ply\r") parse_fail(name, lineno, "missing ply magic");

  long vertex_count = -1;
  std::vector<std::string> vertex_props;
  bool in_vertex_element = false;
  for (;;) {
    next_line();
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream row(line);
    std::string tok;
    row >> tok;
    if (tok == "comment" || tok.empty()) continue;
    if (tok == "format") {
      std::string kind;
      row >> kind;
      if (kind != "ascii") throw UnsupportedFormat(name + ": only ascii ply is supported");
      continue;
    }
    if (tok == "element") {
      std::string what;
      long count = 0;
      if (!(row >> what >> count)) parse_fail(name, lineno, "bad element line");
      in_vertex_element = what == "vertex";
      if (in_vertex_element) vertex_count = count;
      continue;
    }
    if (tok == "property") {
      if (in_vertex_element) {
        std::string type, pname;
        if (!(row >> type)) parse_fail(name, lineno, "bad property line");
        if (type == "list") {
          parse_fail(name, lineno, "list property in vertex element");
        }
        if (!(row >> pname)) parse_fail(name, lineno, "bad property line");
        vertex_props.push_back(pname);
      }
      continue;
    }
    if (tok == "end_header") break;
    parse_fail(name, lineno, "unrecognized header token '" + tok + "'");
  }
  if (vertex_count < 0) parse_fail(name, lineno, "no vertex element");

  auto prop_index = [&](const char* want) {
    const auto it = std::find(vertex_props.begin(), vertex_props.end(), want);
    if (it == vertex_props.end()) {
      throw ParseError(name + ": vertex element lacks property " + want);
    }
    return static_cast<size_t>(it - vertex_props.begin());
  };
  const size_t ix = prop_index("x"), iy = prop_index("y"), iz = prop_index("z");

  PointCloud cloud;
  cloud.pts.resize(vertex_count, 3);
  std::vector<double> fields(vertex_props.size());
  for (long v = 0; v < vertex_count; ++v) {
    next_line();
    std::istringstream row(line);
    for (size_t f = 0; f < fields.size(); ++f) {
      if (!(row >> fields[f])) parse_fail(name, lineno, "short vertex row");
    }
    cloud.pts(v, 0) = fields[ix];
    cloud.pts(v, 1) = fields[iy];
    cloud.pts(v, 2) = fields[iz];
  }
  validate_cloud(cloud);
  return cloud;
}

PointCloud read_cloud(const std::string& path) {
  const std::string ext = lower_ext(path);
  std::ifstream in = open_in(path);
  if (ext == "xyz" || ext == "txt") return read_xyz(in, path);
  if (ext == "ply") return read_ply(in, path);
  throw UnsupportedFormat(path + ": expected .xyz, .txt, or .ply");
}

void write_xyz(const std::string& path, const PointCloud& cloud) {
  std::ofstream out = open_out(path);
  for (Eigen::Index i = 0; i < cloud.pts.rows(); ++i) {
    out << format_g17(cloud.pts(i, 0)) << ' ' << format_g17(cloud.pts(i, 1)) << ' '
        << format_g17(cloud.pts(i, 2)) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_spectrum_csv(const std::string& path, const FractionalSpectrum& spectrum) {
  std::ofstream out = open_out(path);
  const Eigen::Index channels = spectrum.coeffs.cols();
  const bool xyz = channels == 3;
  auto channel_name = [&](Eigen::Index c) {
    if (xyz) return std::string(1, "xyz"[c]);
    return std::to_string(c);
  };
  out << "index";
  for (Eigen::Index c = 0; c < channels; ++c) {
    out << ",re_" << channel_name(c) << ",im_" << channel_name(c) << ",mag_" << channel_name(c);
  }
  if (channels > 1) out << ",mag";
  out << '\n';
  for (Eigen::Index i = 0; i < spectrum.coeffs.rows(); ++i) {
    out << i;
    for (Eigen::Index c = 0; c < channels; ++c) {
      const Cplx v = spectrum.coeffs(i, c);
      out << ',' << format_g17(v.real()) << ',' << format_g17(v.imag()) << ','
          << format_g17(std::abs(v));
    }
    if (channels > 1) out << ',' << format_g17(spectrum.coeffs.row(i).norm());
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

void write_curve_csv(const std::string& path, const std::string& x_name,
                     const std::string& y_name, const std::vector<double>& xs,
                     const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw DimensionMismatch("curve columns differ in length");
  std::ofstream out = open_out(path);
  out << x_name << ',' << y_name << '\n';
  for (size_t i = 0; i < xs.size(); ++i) {
    out << format_g17(xs[i]) << ',' << format_g17(ys[i]) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

namespace {

struct CubeMeta {
  int range_cells = 0;
  int pulses = 0;
  double prf_hz = 0.0;
  double wavelength_m = 0.0;
};

CubeMeta read_sidecar(const std::string& path) {
  std::ifstream in = open_in(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  CubeMeta meta;
  try {
    meta.range_cells = j.at("range_cells").get<int>();
    meta.pulses = j.at("pulses").get<int>();
    meta.prf_hz = j.at("prf_hz").get<double>();
    meta.wavelength_m = j.at("wavelength_m").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (meta.range_cells < 1 || meta.pulses < 2) {
    throw ParseError(path + ": range_cells/pulses out of range");
  }
  return meta;
}

}  // namespace

RadarCube read_cube(const std::string& data_path, const std::string& sidecar_path) {
  const CubeMeta meta = read_sidecar(sidecar_path);
  RadarCube cube;
  cube.prf_hz = meta.prf_hz;
  cube.wavelength_m = meta.wavelength_m;
  cube.echoes.resize(meta.range_cells, meta.pulses);

  const std::string ext = lower_ext(data_path);
  if (ext == "bin") {
    std::ifstream in = open_in(data_path);
    std::vector<double> raw(2 * static_cast<size_t>(meta.range_cells) * meta.pulses);
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(double)));
    if (static_cast<size_t>(in.gcount()) != raw.size() * sizeof(double)) {
      throw ParseError(data_path + ": short read, expected " + std::to_string(raw.size()) +
                       " doubles");
    }
    size_t k = 0;
    for (int r = 0; r < meta.range_cells; ++r) {
      for (int m = 0; m < meta.pulses; ++m, k += 2) {
        cube.echoes(r, m) = Cplx(raw[k], raw[k + 1]);
      }
    }
  } else if (ext == "csv") {
    std::ifstream in = open_in(data_path);
    std::string line;
    int lineno = 0;
    for (int r = 0; r < meta.range_cells; ++r) {
      if (!std::getline(in, line)) parse_fail(data_path, lineno, "fewer rows than range_cells");
      ++lineno;
      std::istringstream row(line);
      std::string field;
      for (int m = 0; m < meta.pulses; ++m) {
        double re, im;
        if (!std::getline(row, field, ',')) parse_fail(data_path, lineno, "short row");
        try {
          re = std::stod(field);
        } catch (const std::exception&) {
          parse_fail(data_path, lineno, "bad float '" + field + "'");
        }
        if (!std::getline(row, field, ',')) parse_fail(data_path, lineno, "short row");
        try {
          im = std::stod(field);
        } catch (const std::exception&) {
          parse_fail(data_path, lineno, "bad float '" + field + "'");
        }
        cube.echoes(r, m) = Cplx(re, im);
      }
      if (std::getline(row, field, ',')) parse_fail(data_path, lineno, "extra fields");
    }
  } else {
    throw UnsupportedFormat(data_path + ": expected .csv or .bin cube data");
  }
  if (!cube.echoes.allFinite()) throw ParseError(data_path + ": non-finite echoes");
  return cube;
}

void write_cube(const std::string& data_path, const std::string& sidecar_path,
                const RadarCube& cube) {
  {
    nlohmann::json j;
    j["range_cells"] = cube.range_cells();
    j["pulses"] = cube.pulses();
    j["prf_hz"] = cube.prf_hz;
    j["wavelength_m"] = cube.wavelength_m;
    std::ofstream out = open_out(sidecar_path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + sidecar_path);
  }
  const std::string ext = lower_ext(data_path);
  if (ext == "bin") {
    std::ofstream out = open_out(data_path);
    std::vector<double> raw;
    raw.reserve(2 * static_cast<size_t>(cube.echoes.size()));
    for (int r = 0; r < cube.range_cells(); ++r) {
      for (int m = 0; m < cube.pulses(); ++m) {
        raw.push_back(cube.echoes(r, m).real());
        raw.push_back(cube.echoes(r, m).imag());
      }
    }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * sizeof(double)));
    if (!out) throw IoError("write failed: " + data_path);
  } else if (ext == "csv") {
    std::ofstream out = open_out(data_path);
    for (int r = 0; r < cube.range_cells(); ++r) {
      for (int m = 0; m < cube.pulses(); ++m) {
        if (m) out << ',';
        out << format_g17(cube.echoes(r, m).real()) << ','
            << format_g17(cube.echoes(r, m).imag());
      }
      out << '\n';
    }
    if (!out) throw IoError("write failed: " + data_path);
  } else {
    throw UnsupportedFormat(data_path + ": expected .csv or .bin cube data");
  }
}

}  // namespace pmfht
