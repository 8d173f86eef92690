#include "actrec/psinfer/grid.h"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "actrec/common/error.h"

namespace actrec::psinfer {

namespace {

constexpr char kMagic[8] = {'A', 'C', 'T', 'G', 'R', 'I', 'D', '1'};

}  // namespace

void validate_grids(const LikelihoodGrids& grids) {
  if (grids.empty()) throw ValidationError("no likelihood grids");
  for (std::size_t p = 0; p < grids.size(); ++p) {
    const auto& g = grids[p];
    if (g.rows() != grids[0].rows() || g.cols() != grids[0].cols()) {
      throw ValidationError("likelihood grid " + std::to_string(p) + " has different dimensions");
    }
    if (g.size() == 0) throw ValidationError("likelihood grid " + std::to_string(p) + " is empty");
    if (!g.allFinite() || (g.array() < 0).any()) {
      throw ValidationError("likelihood grid " + std::to_string(p) + " has negative or non-finite entries");
    }
    if (!(g.maxCoeff() > 0)) throw ValidationError("likelihood grid " + std::to_string(p) + " has no valid placement");
  }
}

void save_grids(const std::filesystem::path& path, const LikelihoodGrids& grids) {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write " + path.string());
  std::uint64_t header[3] = {grids.size(), grids.empty() ? 0u : static_cast<std::uint64_t>(grids[0].rows()),
                             grids.empty() ? 0u : static_cast<std::uint64_t>(grids[0].cols())};
  out.write(kMagic, sizeof kMagic);
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  for (const auto& g : grids) {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = g;
    out.write(reinterpret_cast<const char*>(rm.data()), static_cast<std::streamsize>(rm.size() * sizeof(double)));
  }
  if (!out) throw RuntimeError("failed writing " + path.string());
}

LikelihoodGrids load_grids(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  char magic[8];
  std::uint64_t header[3];
  in.read(magic, sizeof magic);
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) throw ValidationError(path.string() + ": not a grid file");
  if (header[1] == 0 || header[2] == 0 || header[0] > 1024 || header[1] * header[2] > (1u << 26)) {
    throw ValidationError(path.string() + ": implausible grid header");
  }
  LikelihoodGrids out;
  for (std::uint64_t p = 0; p < header[0]; ++p) {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(header[1], header[2]);
    in.read(reinterpret_cast<char*>(rm.data()), static_cast<std::streamsize>(rm.size() * sizeof(double)));
    if (!in) throw ValidationError(path.string() + ": truncated grid data");
    out.emplace_back(rm);
  }
  return out;
}

}  // namespace actrec::psinfer
