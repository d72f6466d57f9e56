#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dae/common.hpp"
#include "dae/dataset.hpp"
#include "dae/model.hpp"

namespace dae::io {

// DMX1: magic "DMX1", u32 LE rows, u32 LE cols, rows*cols float64 LE
// row-major.
void write_dmx(const std::string& path, const Md& M);
Md read_dmx(const std::string& path);

// DAE1: magic "DAE1", u16 version=1, u8 tied, u32 d, u32 p, f64 sigma_train,
// W1 (and W2 when untied) as nested DMX1 payloads, u32 metadata length,
// UTF-8 JSON metadata.
void write_dae(const std::string& path, const DaeModel& m,
               const nlohmann::json& metadata);
struct Checkpoint {
  DaeModel model;
  std::string metadata_json;
};
Checkpoint read_dae(const std::string& path);

std::uint64_t fnv1a(const void* data, std::size_t len);
std::uint64_t file_hash(const std::string& path);

void write_labels(const std::string& path, const Dataset& data);
// assembles a Dataset from a DMX matrix and its label sidecar
Dataset read_dataset(const std::string& dmx_path, const std::string& labels_path);

// RFC-4180 CSV with a mandatory header row.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// 8-bit binary PGM; per-image min-max normalization recorded in the comment.
void write_pgm_grid(const std::string& path, const Md& columns, int img_h,
                    int img_w, int grid_cols);

}  // namespace dae::io
