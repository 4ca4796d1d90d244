#pragma once

#include <array>
#include <string>
#include <vector>

namespace gpde {

/// P1 triangle mesh. Triangles are counter-clockwise; `boundary_flags`
/// holds one integer marker per node (0 = interior).
struct Mesh {
  std::vector<std::array<double, 2>> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> boundary_flags;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  double triangle_area(int t) const;
  double area() const;
};

/// Structured mesh of [0,width] x [0,height] with nx*ny cells split into
/// two triangles each.
Mesh generate_rect_mesh(int nx, int ny, double width, double height);

/// Text format: a header line "nv nt", nv lines "x y flag", nt lines
/// "i j k" with 1-based node indices. Malformed input raises
/// std::runtime_error naming the offending line or triangle.
Mesh load_mesh(const std::string& path);
void save_mesh(const Mesh& mesh, const std::string& path);

/// Consistency checks shared by the loaders: index ranges, positive
/// areas, duplicate nodes. Throws on the first violation.
void validate_mesh(const Mesh& mesh);

}  // namespace gpde
