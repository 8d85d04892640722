#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>

namespace multigait {

enum class TerrainType : std::uint32_t {
  kRoughFlat = 0,
  kSlope = 1,
  kWave = 2,
  kStairs = 3,
  kDiscreteSteps = 4,
};

constexpr int kNumTerrainTypes = 5;
constexpr int kTerrainLevels = 10;  // difficulty 0..9

TerrainType terrainTypeFromName(const std::string& name);
std::string terrainTypeName(TerrainType type);

struct TerrainConfig {
  double tile_size = 10.0;   // [m], square tile centered on the origin
  double spacing = 0.05;     // [m] grid spacing
  double max_noise = 0.03;   // rough flat amplitude at top difficulty
  double max_slope_deg = 40.0;
  double max_wave_amp = 0.08;
  double wave_length = 2.0;
  double stair_rise_min = 0.05;  // at difficulty 1
  double stair_rise_max = 0.20;  // at difficulty 9
  double stair_tread = 0.25;
  double max_step_height = 0.10;  // discrete steps at top difficulty
  double step_block = 0.45;
  double flat_radius = 0.5;  // level spawn region kept flat
};

// Heightfield on a regular xy lattice centered at the origin.
struct TerrainField {
  TerrainType type = TerrainType::kRoughFlat;
  int difficulty = 0;
  double spacing = 0.05;
  double origin_x = 0.0;  // world position of grid node (0, 0)
  double origin_y = 0.0;
  Eigen::MatrixXd heights;  // nx x ny

  // Bilinear interpolation; queries beyond the lattice clamp to the border.
  double heightAt(double x, double y) const;
  double maxAbsHeight() const { return heights.cwiseAbs().maxCoeff(); }
};

// Parametric fields per type; amplitude ramps with difficulty/9 except for
// stairs, whose riser runs stair_rise_min..max over difficulties 1..9.
TerrainField generateTerrain(TerrainType type, int difficulty, std::uint64_t seed,
                             const TerrainConfig& cfg = {});

// Binary heightfield io (dims, spacing, type header) and a CSV dump.
void writeHeightfield(const std::filesystem::path& path, const TerrainField& f);
TerrainField readHeightfield(const std::filesystem::path& path);
void writeHeightfieldCsv(const std::filesystem::path& path, const TerrainField& f);

}  // namespace multigait
