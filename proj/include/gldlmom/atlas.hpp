#pragma once

// Numerical atlas of the (tau3, tau4) plane: sample the (lambda3, lambda4)
// plane of one GLD region, map every node through the closed-form ratios,
// and extract boundaries, contours and multiple-solution censuses.
//
// The grid kernels come in two flavours: `*_serial` is the plain reference
// loop and the unsuffixed name is the OpenMP version. Both produce
// bit-identical output.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gldlmom/gld.hpp"
#include "gldlmom/lmoments.hpp"
#include "gldlmom/nelder_mead.hpp"

namespace gldlmom {

enum class Spacing { Equal, LogLike };

/// One grid axis. LogLike places nodes at anchor + geometric progression
/// from (lo - anchor) to (hi - anchor); both offsets must be positive.
struct AxisSpec {
  Spacing spacing = Spacing::Equal;
  double lo = 0.0;
  double hi = 1.0;
  double anchor = 0.0;
};

struct GridLimits {
  AxisSpec lambda3;
  AxisSpec lambda4;
};

struct GridResolution {
  std::size_t n3 = 512;
  std::size_t n4 = 512;
};

/// Default limits:
///   R3: both axes LogLike on [1e-6, 1e4];
///   R4: both axes Equal on [-1 + 1e-10, -1e-10];
///   R5: lambda3 as in R4, lambda4 LogLike on [1 + 1e-6, 1 + 1e4] anchored at 1;
///   R6: R5 with the axes swapped.
GridLimits default_limits(Region region);

struct LambdaGrid {
  Region region = Region::Invalid;
  std::vector<double> lambda3_axis;
  std::vector<double> lambda4_axis;
  Spacing spacing3 = Spacing::Equal;
  Spacing spacing4 = Spacing::Equal;

  std::size_t n3() const noexcept { return lambda3_axis.size(); }
  std::size_t n4() const noexcept { return lambda4_axis.size(); }
  ShapePair node(std::size_t i, std::size_t j) const { return {lambda3_axis[i], lambda4_axis[j]}; }
};

/// Throws UnknownRegion outside R3..R6, DomainError for fewer than 16 nodes
/// per axis or malformed limits.
LambdaGrid build_grid(Region region, GridResolution resolution = {},
                      const std::optional<GridLimits>& limits = std::nullopt);

/// Images of the grid nodes, row-major in lambda3 (index i) then lambda4 (j).
/// Masked nodes hold NaN.
struct TauGrid {
  Region region = Region::Invalid;
  std::size_t n3 = 0;
  std::size_t n4 = 0;
  std::vector<TauPair> points;
  std::vector<std::uint8_t> mask;  // 1 = valid node

  std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * n4 + j; }
  const TauPair& at(std::size_t i, std::size_t j) const { return points[index(i, j)]; }
  bool valid(std::size_t i, std::size_t j) const { return mask[index(i, j)] != 0; }
  std::size_t valid_count() const;
};

/// Bitwise equality; NaN images of masked nodes compare equal to themselves.
bool identical(const TauGrid& a, const TauGrid& b);

/// A node is valid when its shape pair is admissible, both exponents exceed
/// -1 and the image passes feasibility_check.
TauGrid map_grid(const LambdaGrid& g);
TauGrid map_grid_serial(const LambdaGrid& g);

struct BoundaryCandidate {
  std::size_t i = 0;
  std::size_t j = 0;
  TauPair tau;
  bool grid_edge = false;  // on the rim of the grid or of the valid mask

  friend bool operator==(const BoundaryCandidate&, const BoundaryCandidate&) = default;
};

/// A valid node is a candidate when its image is not inside the quadrilateral
/// formed by the images of its four axis neighbours, or when it sits on the
/// rim (grid edge or next to a masked node). Ordered by (i, j).
std::vector<BoundaryCandidate> potential_boundary_points(const TauGrid& t);
std::vector<BoundaryCandidate> potential_boundary_points_serial(const TauGrid& t);

enum class AssemblyMode {
  CandidateChain,  // barrier drawn through candidate-incident grid edges only
  FullMesh,        // every grid edge drawn
};

struct BoundaryPolygon {
  Region region = Region::Invalid;
  std::vector<TauPair> vertices;  // counterclockwise, first == last
  AssemblyMode mode = AssemblyMode::CandidateChain;

  bool contains(TauPair p, double tolerance = 1e-9) const;
};

struct BoundaryOptions {
  std::size_t raster = 2048;  // pixels per axis of the working raster
};

/// Outline of the region covered by the images.
///
/// The candidate-incident grid edges are drawn into a raster over the image
/// bounding box, the exterior is flood-filled from the border, and the outer
/// contour of the remainder (dilated by one pixel) is traced and simplified
/// by half a pixel. Every valid image is then checked to be inside or on the
/// polygon within 1e-9; on failure the whole mesh is drawn instead, and if
/// that also fails AssemblyFailure is thrown. Separate mesh components are
/// bridged by straight segments.
BoundaryPolygon assemble_boundary(std::span<const BoundaryCandidate> candidates, const TauGrid& t,
                                  const BoundaryOptions& options = {});

enum class Statistic { Tau3, Tau4 };

using Polyline = std::vector<ShapePair>;

struct ContourSet {
  Region region = Region::Invalid;
  Statistic statistic = Statistic::Tau3;
  std::vector<double> levels;
  std::vector<std::vector<Polyline>> polylines;  // one entry per level
};

/// Marching squares over the lambda grid. Segment end points are solved on
/// each crossing edge so every vertex reproduces its level to ~1e-12.
/// Throws EmptyContour if a level has no crossing in the region.
ContourSet contours(const LambdaGrid& g, Statistic statistic, std::span<const double> levels);

struct CensusOptions {
  std::size_t seed_resolution = 96;   // coarse grid per axis
  std::size_t max_seeds_per_region = 24;
  double dedup_tolerance = 1e-3;
  double objective_tolerance = 1e-16;
  std::vector<Region> regions{Region::R3, Region::R4, Region::R5, Region::R6};
  NelderMeadConfig nelder_mead{.tol = 1e-18, .max_iter = 1500};
};

struct CensusSolution {
  ShapePair shape;
  Region region = Region::Invalid;
  double objective = 0.0;
  TauPair achieved;
  GldParams standardized;  // lambda1, lambda2 chosen so that L1 = 0 and L2 = 1
};

/// All shape pairs with the given (tau3, tau4), found by Nelder-Mead from the
/// local minima of the objective on coarse per-region grids and polished by
/// Newton steps. Solutions closer than dedup_tolerance are merged. Sorted by
/// region, then lambda3.
std::vector<CensusSolution> solution_census(double tau3, double tau4, const CensusOptions& options = {});

}  // namespace gldlmom
