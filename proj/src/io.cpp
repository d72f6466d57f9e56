#include "dae/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dae::io {

namespace {

void put_u16(std::ostream& os, std::uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v & 0xFF),
                        static_cast<unsigned char>(v >> 8)};
  os.write(reinterpret_cast<const char*>(b), 2);
}

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint16_t get_u16(std::istream& is) {
  unsigned char b[2];
  is.read(reinterpret_cast<char*>(b), 2);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

void write_dmx_stream(std::ostream& os, const Md& M) {
  os.write("DMX1", 4);
  put_u32(os, static_cast<std::uint32_t>(M.rows()));
  put_u32(os, static_cast<std::uint32_t>(M.cols()));
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) put_f64(os, M(i, j));
}

Md read_dmx_stream(std::istream& is, const std::string& what) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::strncmp(magic, "DMX1", 4) != 0)
    throw ConfigError(what + ": bad DMX1 magic");
  const std::uint32_t rows = get_u32(is);
  const std::uint32_t cols = get_u32(is);
  Md M(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j) M(i, j) = get_f64(is);
  if (!is) throw ConfigError(what + ": truncated DMX1 payload");
  return M;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open for reading: " + path);
  return is;
}

}  // namespace

void write_dmx(const std::string& path, const Md& M) {
  auto os = open_out(path);
  write_dmx_stream(os, M);
  if (!os) throw ConfigError("write failed: " + path);
}

Md read_dmx(const std::string& path) {
  auto is = open_in(path);
  return read_dmx_stream(is, path);
}

void write_dae(const std::string& path, const DaeModel& m,
               const nlohmann::json& metadata) {
  auto os = open_out(path);
  os.write("DAE1", 4);
  put_u16(os, 1);
  os.put(m.tied ? 1 : 0);
  put_u32(os, static_cast<std::uint32_t>(m.d()));
  put_u32(os, static_cast<std::uint32_t>(m.p()));
  put_f64(os, m.sigma_train);
  write_dmx_stream(os, m.W1);
  if (!m.tied) write_dmx_stream(os, m.W2());
  const std::string meta = metadata.dump();
  put_u32(os, static_cast<std::uint32_t>(meta.size()));
  os.write(meta.data(), static_cast<std::streamsize>(meta.size()));
  if (!os) throw ConfigError("write failed: " + path);
}

Checkpoint read_dae(const std::string& path) {
  auto is = open_in(path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::strncmp(magic, "DAE1", 4) != 0)
    throw ConfigError(path + ": bad DAE1 magic");
  const std::uint16_t version = get_u16(is);
  if (version != 1) throw ConfigError(path + ": unsupported DAE1 version");
  const bool tied = is.get() != 0;
  const std::uint32_t d = get_u32(is);
  const std::uint32_t p = get_u32(is);
  const double sigma = get_f64(is);
  Md W1 = read_dmx_stream(is, path + " (W1)");
  if (W1.rows() != d || W1.cols() != p)
    throw ConfigError(path + ": W1 payload shape mismatch");
  Checkpoint ck;
  if (tied) {
    ck.model = DaeModel::make_tied(std::move(W1), sigma);
  } else {
    Md W2 = read_dmx_stream(is, path + " (W2)");
    if (W2.rows() != d || W2.cols() != p)
      throw ConfigError(path + ": W2 payload shape mismatch");
    ck.model = DaeModel::make_untied(std::move(W1), std::move(W2), sigma);
  }
  const std::uint32_t len = get_u32(is);
  ck.metadata_json.resize(len);
  is.read(ck.metadata_json.data(), len);
  if (!is) throw ConfigError(path + ": truncated metadata");
  return ck;
}

std::uint64_t fnv1a(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t file_hash(const std::string& path) {
  auto is = open_in(path);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  char buf[4096];
  while (is.read(buf, sizeof buf) || is.gcount() > 0) {
    const auto got = is.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001B3ULL;
    }
    if (got < static_cast<std::streamsize>(sizeof buf)) break;
  }
  return h;
}

void write_labels(const std::string& path, const Dataset& data) {
  nlohmann::json j;
  j["cluster_ids"] = data.cluster_ids;
  auto os = open_out(path);
  os << j.dump() << "\n";
}

Dataset read_dataset(const std::string& dmx_path, const std::string& labels_path) {
  Dataset data;
  data.X = read_dmx(dmx_path);
  data.d = static_cast<int>(data.X.rows());
  data.n = static_cast<int>(data.X.cols());
  auto is = open_in(labels_path);
  nlohmann::json j;
  is >> j;
  if (!j.contains("cluster_ids"))
    throw ConfigError(labels_path + ": missing cluster_ids");
  data.cluster_ids = j["cluster_ids"].get<std::vector<int>>();
  require(static_cast<int>(data.cluster_ids.size()) == data.n,
          labels_path + ": label count mismatch");
  data.M = 0;
  for (int id : data.cluster_ids) data.M = std::max(data.M, id);
  data.cluster_sizes.assign(data.M, 0);
  for (int id : data.cluster_ids) {
    require(id >= 1 && id <= data.M, labels_path + ": label out of range");
    ++data.cluster_sizes[id - 1];
  }
  data.validate();
  return data;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  auto os = open_out(path);
  for (size_t i = 0; i < header.size(); ++i)
    os << header[i] << (i + 1 < header.size() ? "," : "");
  os << "\r\n";
  std::ostringstream num;
  num.precision(17);
  for (const auto& row : rows) {
    require(row.size() == header.size(), "write_csv: row width mismatch");
    for (size_t i = 0; i < row.size(); ++i) {
      num.str("");
      num << row[i];
      os << num.str() << (i + 1 < row.size() ? "," : "");
    }
    os << "\r\n";
  }
}

void write_pgm_grid(const std::string& path, const Md& columns, int img_h,
                    int img_w, int grid_cols) {
  require(img_h * img_w == columns.rows(),
          "write_pgm_grid: image shape does not match vector length");
  require(grid_cols >= 1, "write_pgm_grid: grid_cols must be >= 1");
  const int n = static_cast<int>(columns.cols());
  const int grid_rows = (n + grid_cols - 1) / grid_cols;
  const int W = grid_cols * img_w, H = grid_rows * img_h;
  std::vector<unsigned char> pix(static_cast<size_t>(W) * H, 0);
  for (int s = 0; s < n; ++s) {
    const double lo = columns.col(s).minCoeff();
    const double hi = columns.col(s).maxCoeff();
    const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
    const int r0 = (s / grid_cols) * img_h, c0 = (s % grid_cols) * img_w;
    for (int r = 0; r < img_h; ++r)
      for (int c = 0; c < img_w; ++c) {
        const double v = (columns(r * img_w + c, s) - lo) * scale;
        pix[static_cast<size_t>(r0 + r) * W + (c0 + c)] =
            static_cast<unsigned char>(std::lround(v));
      }
  }
  auto os = open_out(path);
  os << "P5\n# per-image min-max normalized to [0,255]\n"
     << W << " " << H << "\n255\n";
  os.write(reinterpret_cast<const char*>(pix.data()),
           static_cast<std::streamsize>(pix.size()));
}

}  // namespace dae::io
