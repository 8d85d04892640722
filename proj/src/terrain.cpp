#include "multigait/terrain.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

namespace multigait {

TerrainType terrainTypeFromName(const std::string& name) {
  if (name == "rough_flat") return TerrainType::kRoughFlat;
  if (name == "slope") return TerrainType::kSlope;
  if (name == "wave") return TerrainType::kWave;
  if (name == "stairs") return TerrainType::kStairs;
  if (name == "discrete_steps") return TerrainType::kDiscreteSteps;
  throw std::out_of_range("unknown terrain type: " + name);
}

std::string terrainTypeName(TerrainType type) {
  switch (type) {
    case TerrainType::kRoughFlat: return "rough_flat";
    case TerrainType::kSlope: return "slope";
    case TerrainType::kWave: return "wave";
    case TerrainType::kStairs: return "stairs";
    case TerrainType::kDiscreteSteps: return "discrete_steps";
  }
  throw std::out_of_range("unknown terrain type enum");
}

double TerrainField::heightAt(double x, double y) const {
  if (!std::isfinite(x) || !std::isfinite(y)) return 0.0;
  const double fx = (x - origin_x) / spacing;
  const double fy = (y - origin_y) / spacing;
  const int nx = static_cast<int>(heights.rows());
  const int ny = static_cast<int>(heights.cols());
  const double cx = std::clamp(fx, 0.0, static_cast<double>(nx - 1));
  const double cy = std::clamp(fy, 0.0, static_cast<double>(ny - 1));
  const int ix = std::min(static_cast<int>(cx), nx - 2);
  const int iy = std::min(static_cast<int>(cy), ny - 2);
  const double ax = cx - ix;
  const double ay = cy - iy;
  return heights(ix, iy) * (1 - ax) * (1 - ay) +
         heights(ix + 1, iy) * ax * (1 - ay) +
         heights(ix, iy + 1) * (1 - ax) * ay +
         heights(ix + 1, iy + 1) * ax * ay;
}

TerrainField generateTerrain(TerrainType type, int difficulty, std::uint64_t seed,
                             const TerrainConfig& cfg) {
  if (difficulty < 0 || difficulty >= kTerrainLevels) {
    throw std::invalid_argument("terrain difficulty must be in 0..9");
  }
  const double t = difficulty / 9.0;
  const int n = static_cast<int>(std::round(cfg.tile_size / cfg.spacing)) + 1;

  TerrainField f;
  f.type = type;
  f.difficulty = difficulty;
  f.spacing = cfg.spacing;
  f.origin_x = -cfg.tile_size / 2.0;
  f.origin_y = -cfg.tile_size / 2.0;
  f.heights = Eigen::MatrixXd::Zero(n, n);

  std::mt19937_64 rng(seed);

  switch (type) {
    case TerrainType::kRoughFlat: {
      const double amp = cfg.max_noise * t;
      std::uniform_real_distribution<double> noise(-amp, amp);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) f.heights(i, j) = noise(rng);
      break;
    }
    case TerrainType::kSlope: {
      const double slope = std::tan(cfg.max_slope_deg * t * M_PI / 180.0);
      for (int i = 0; i < n; ++i) {
        const double x = f.origin_x + i * cfg.spacing;
        const double h = x > cfg.flat_radius ? slope * (x - cfg.flat_radius) : 0.0;
        for (int j = 0; j < n; ++j) f.heights(i, j) = h;
      }
      break;
    }
    case TerrainType::kWave: {
      const double amp = cfg.max_wave_amp * t;
      for (int i = 0; i < n; ++i) {
        const double x = f.origin_x + i * cfg.spacing;
        const double r = std::abs(x) - cfg.flat_radius;
        const double h = r > 0 ? amp * std::sin(2.0 * M_PI * r / cfg.wave_length) : 0.0;
        for (int j = 0; j < n; ++j) f.heights(i, j) = h;
      }
      break;
    }
    case TerrainType::kStairs: {
      const double rise =
          difficulty == 0
              ? 0.0
              : cfg.stair_rise_min +
                    (cfg.stair_rise_max - cfg.stair_rise_min) * (difficulty - 1) / 8.0;
      for (int i = 0; i < n; ++i) {
        const double x = f.origin_x + i * cfg.spacing;
        const double beyond = x - cfg.flat_radius;
        const double h = beyond > 0 ? rise * (std::floor(beyond / cfg.stair_tread) + 1.0) : 0.0;
        for (int j = 0; j < n; ++j) f.heights(i, j) = h;
      }
      break;
    }
    case TerrainType::kDiscreteSteps: {
      const double amp = cfg.max_step_height * t;
      std::uniform_real_distribution<double> block_height(-amp, amp);
      const int blocks = std::max(1, static_cast<int>(cfg.tile_size / cfg.step_block));
      Eigen::MatrixXd levels(blocks, blocks);
      for (int i = 0; i < blocks; ++i)
        for (int j = 0; j < blocks; ++j) levels(i, j) = block_height(rng);
      for (int i = 0; i < n; ++i) {
        const double x = f.origin_x + i * cfg.spacing;
        for (int j = 0; j < n; ++j) {
          const double y = f.origin_y + j * cfg.spacing;
          if (std::abs(x) < cfg.flat_radius && std::abs(y) < cfg.flat_radius) continue;
          const int bi = std::clamp(
              static_cast<int>((x - f.origin_x) / cfg.step_block), 0, blocks - 1);
          const int bj = std::clamp(
              static_cast<int>((y - f.origin_y) / cfg.step_block), 0, blocks - 1);
          f.heights(i, j) = levels(bi, bj);
        }
      }
      break;
    }
  }
  return f;
}

namespace {
constexpr char kMagic[4] = {'M', 'G', 'H', 'F'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void writeHeightfield(const std::filesystem::path& path, const TerrainField& f) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write heightfield: " + path.string());
  out.write(kMagic, 4);
  const std::uint32_t version = kVersion;
  const auto type = static_cast<std::uint32_t>(f.type);
  const std::int32_t difficulty = f.difficulty;
  const std::uint64_t nx = f.heights.rows(), ny = f.heights.cols();
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&type), 4);
  out.write(reinterpret_cast<const char*>(&difficulty), 4);
  out.write(reinterpret_cast<const char*>(&nx), 8);
  out.write(reinterpret_cast<const char*>(&ny), 8);
  out.write(reinterpret_cast<const char*>(&f.spacing), 8);
  out.write(reinterpret_cast<const char*>(&f.origin_x), 8);
  out.write(reinterpret_cast<const char*>(&f.origin_y), 8);
  out.write(reinterpret_cast<const char*>(f.heights.data()),
            static_cast<std::streamsize>(8 * f.heights.size()));
  if (!out) throw std::runtime_error("heightfield write failed: " + path.string());
}

TerrainField readHeightfield(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read heightfield: " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != std::string(kMagic, 4)) {
    throw std::runtime_error("not a heightfield file: " + path.string());
  }
  std::uint32_t version = 0, type = 0;
  std::int32_t difficulty = 0;
  std::uint64_t nx = 0, ny = 0;
  in.read(reinterpret_cast<char*>(&version), 4);
  if (version != kVersion) throw std::runtime_error("unsupported heightfield version");
  in.read(reinterpret_cast<char*>(&type), 4);
  in.read(reinterpret_cast<char*>(&difficulty), 4);
  in.read(reinterpret_cast<char*>(&nx), 8);
  in.read(reinterpret_cast<char*>(&ny), 8);
  TerrainField f;
  f.type = static_cast<TerrainType>(type);
  f.difficulty = difficulty;
  in.read(reinterpret_cast<char*>(&f.spacing), 8);
  in.read(reinterpret_cast<char*>(&f.origin_x), 8);
  in.read(reinterpret_cast<char*>(&f.origin_y), 8);
  f.heights.resize(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(ny));
  in.read(reinterpret_cast<char*>(f.heights.data()),
          static_cast<std::streamsize>(8 * f.heights.size()));
  if (!in) throw std::runtime_error("truncated heightfield: " + path.string());
  return f;
}

void writeHeightfieldCsv(const std::filesystem::path& path, const TerrainField& f) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write csv: " + path.string());
  out << "x,y,height\n";
  for (Eigen::Index i = 0; i < f.heights.rows(); ++i) {
    for (Eigen::Index j = 0; j < f.heights.cols(); ++j) {
      out << f.origin_x + i * f.spacing << ',' << f.origin_y + j * f.spacing << ','
          << f.heights(i, j) << '\n';
    }
  }
}

}  // namespace multigait
