#include "twm/outputs.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace twm {

namespace {

constexpr const char* kModule = "cli-harness";

std::ofstream open_out(const std::string& path, const char* op,
                       std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw SimError(kModule, op, "cannot write file: " + path);
  return out;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out = open_out(path, "write_matrix_csv");
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << fmt_double(m(i, j));
    }
    out << '\n';
  }
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SimError(kModule, "read_matrix_csv", "cannot open file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    std::vector<double> row;
    double v;
    while (ls >> v) row.push_back(v);
    if (!rows.empty() && row.size() != rows.front().size())
      throw SimError(kModule, "read_matrix_csv", "ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw SimError(kModule, "read_matrix_csv", "empty matrix in " + path);
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

namespace {

nlohmann::json flagged_json(const FlaggedValue& v) {
  nlohmann::json j;
  j["defined"] = v.defined;
  if (v.defined) j["value"] = v.value;
  return j;
}

}  // namespace

void write_fom_json(const std::string& path, const FiguresOfMerit& fom,
                    const std::string& config_hash, const nlohmann::json& extra) {
  nlohmann::json doc;
  doc["config_hash"] = config_hash;
  doc["schmidt_number"] = flagged_json(fom.schmidt_number);
  doc["purity"] = flagged_json(fom.purity);
  doc["r1"] = fom.r1;
  doc["n_signal"] = fom.n_signal;
  doc["n_idler"] = fom.n_idler;
  doc["gamma1"] = fom.gamma1;
  doc["separability"] = flagged_json(fom.separability);
  for (auto it = extra.begin(); it != extra.end(); ++it) doc[it.key()] = it.value();
  open_out(path, "write_fom_json") << doc.dump(2) << '\n';
}

void write_propagator_json(const std::string& path, const Propagator& prop,
                           const std::string& config_hash) {
  nlohmann::json doc;
  doc["config_hash"] = config_hash;
  doc["kind"] = prop.kind == ProcessKind::PDC ? "pdc" : "qfc";
  doc["n"] = prop.n;
  doc["eta_tot"] = prop.eta_tot;
  doc["frequency_dependent_loss"] = prop.frequency_dependent_loss;
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (int i = 0; i < prop.k.rows(); ++i) {
    nlohmann::json rr = nlohmann::json::array(), ri = nlohmann::json::array();
    for (int j = 0; j < prop.k.cols(); ++j) {
      rr.push_back(prop.k(i, j).real());
      ri.push_back(prop.k(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  doc["k_re"] = std::move(re);
  doc["k_im"] = std::move(im);
  open_out(path, "write_propagator_json") << doc.dump() << '\n';
}

Propagator read_propagator_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SimError(kModule, "read_propagator_json", "cannot open file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw SimError(kModule, "read_propagator_json", std::string("malformed JSON: ") + e.what());
  }
  Propagator prop;
  try {
    prop.kind = doc.at("kind").get<std::string>() == "qfc" ? ProcessKind::QFC : ProcessKind::PDC;
    prop.n = doc.at("n").get<int>();
    prop.eta_tot = doc.at("eta_tot").get<double>();
    prop.frequency_dependent_loss = doc.at("frequency_dependent_loss").get<bool>();
    const auto& re = doc.at("k_re");
    const auto& im = doc.at("k_im");
    prop.k.resize(re.size(), re.empty() ? 0 : re[0].size());
    for (size_t i = 0; i < re.size(); ++i)
      for (size_t j = 0; j < re[i].size(); ++j)
        prop.k(i, j) = {re[i][j].get<double>(), im[i][j].get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw SimError(kModule, "read_propagator_json",
                   std::string("malformed propagator file: ") + e.what());
  }
  return prop;
}

void write_sweep_csv(const std::string& path, const std::vector<std::string>& fom_names,
                     const std::string& param_name, const std::vector<SweepRow>& rows,
                     const std::string& config_hash) {
  std::ofstream out = open_out(path, "write_sweep_csv");
  out << "# config_hash=" << config_hash << '\n';
  out << param_name << ",seed,aggregate";
  for (const std::string& name : fom_names) out << ',' << name;
  out << '\n';
  for (const SweepRow& row : rows) {
    out << fmt_double(row.value) << ',';
    if (row.aggregate)
      out << row.aggregate_kind << ",1";
    else
      out << row.seed << ",0";
    for (double v : row.foms) out << ',' << fmt_double(v);
    out << '\n';
  }
}

namespace {

void png_chunk(std::ofstream& out, const char type[4], const unsigned char* data, size_t size) {
  auto be32 = [&](std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
    out.write(reinterpret_cast<char*>(b), 4);
  };
  be32(static_cast<std::uint32_t>(size));
  out.write(type, 4);
  if (size) out.write(reinterpret_cast<const char*>(data), size);
  std::uint32_t crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(type), 4);
  if (size) crc = crc32(crc, data, static_cast<uInt>(size));
  be32(crc);
}

}  // namespace

void write_png_gray(const std::string& path, const Eigen::MatrixXd& values) {
  if (values.size() == 0) throw SimError(kModule, "write_png_gray", "empty image");
  if (!values.allFinite()) throw SimError(kModule, "write_png_gray", "non-finite pixel values");
  const int h = static_cast<int>(values.rows());
  const int w = static_cast<int>(values.cols());
  double lo = values.minCoeff(), hi = values.maxCoeff();
  double span = hi > lo ? hi - lo : 1.0;

  std::vector<unsigned char> raw(static_cast<size_t>(h) * (w + 1));
  for (int i = 0; i < h; ++i) {
    raw[static_cast<size_t>(i) * (w + 1)] = 0;  // filter none
    for (int j = 0; j < w; ++j) {
      double x = (values(i, j) - lo) / span;
      raw[static_cast<size_t>(i) * (w + 1) + 1 + j] =
          static_cast<unsigned char>(std::lround(255.0 * x));
    }
  }

  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<unsigned char> compressed(bound);
  if (compress2(compressed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 9) != Z_OK)
    throw SimError(kModule, "write_png_gray", "deflate failed");
  compressed.resize(bound);

  std::ofstream out = open_out(path, "write_png_gray", std::ios::out | std::ios::binary);
  const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  out.write(reinterpret_cast<const char*>(sig), 8);
  unsigned char ihdr[13] = {
      static_cast<unsigned char>(w >> 24), static_cast<unsigned char>(w >> 16),
      static_cast<unsigned char>(w >> 8),  static_cast<unsigned char>(w),
      static_cast<unsigned char>(h >> 24), static_cast<unsigned char>(h >> 16),
      static_cast<unsigned char>(h >> 8),  static_cast<unsigned char>(h),
      8,  // bit depth
      0,  // grayscale
      0, 0, 0};
  png_chunk(out, "IHDR", ihdr, sizeof(ihdr));
  png_chunk(out, "IDAT", compressed.data(), compressed.size());
  png_chunk(out, "IEND", nullptr, 0);
}

}  // namespace twm
