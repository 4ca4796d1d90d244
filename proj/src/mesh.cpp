#include "gpde/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gpde {

namespace {

double signed_area(const std::array<double, 2>& p, const std::array<double, 2>& q,
                   const std::array<double, 2>& r) {
  return 0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (r[0] - p[0]) * (q[1] - p[1]));
}

}  // namespace

double Mesh::triangle_area(int t) const {
  const auto& tri = triangles.at(static_cast<std::size_t>(t));
  return signed_area(nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]);
}

double Mesh::area() const {
  double a = 0.0;
  for (int t = 0; t < num_triangles(); ++t) a += triangle_area(t);
  return a;
}

Mesh generate_rect_mesh(int nx, int ny, double width, double height) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("mesh: nx, ny must be >= 1");
  if (!(width > 0.0) || !(height > 0.0))
    throw std::invalid_argument("mesh: nonpositive dimensions");
  Mesh m;
  m.nodes.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) {
      m.nodes.push_back({width * i / nx, height * j / ny});
      m.boundary_flags.push_back(i == 0 || j == 0 || i == nx || j == ny ? 1 : 0);
    }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return m;
}

void validate_mesh(const Mesh& m) {
  if (m.nodes.empty()) throw std::runtime_error("mesh: no nodes");
  if (m.boundary_flags.size() != m.nodes.size())
    throw std::runtime_error("mesh: flag count does not match node count");
  const int nv = m.num_nodes();
  for (int t = 0; t < m.num_triangles(); ++t) {
    for (int v : m.triangles[t])
      if (v < 0 || v >= nv)
        throw std::runtime_error("mesh: triangle " + std::to_string(t + 1) +
                                 " references node " + std::to_string(v + 1) +
                                 " out of range 1.." + std::to_string(nv));
    if (m.triangle_area(t) <= 1e-14)
      throw std::runtime_error("mesh: triangle " + std::to_string(t + 1) +
                               " is inverted or degenerate");
  }
  // duplicate detection: sort by coordinates, compare neighbours
  std::vector<int> order(m.nodes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return m.nodes[a] < m.nodes[b];
  });
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const auto& p = m.nodes[order[i]];
    const auto& q = m.nodes[order[i + 1]];
    if (std::abs(p[0] - q[0]) <= 1e-12 && std::abs(p[1] - q[1]) <= 1e-12)
      throw std::runtime_error("mesh: duplicate nodes " + std::to_string(order[i] + 1) + " and " +
                               std::to_string(order[i + 1] + 1));
  }
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("mesh: cannot open '" + path + "'");
  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw std::runtime_error("mesh: no nodes (empty file)");
  int nv = 0, nt = 0;
  {
    std::istringstream hs(line);
    if (!(hs >> nv >> nt) || nv <= 0 || nt < 0)
      throw std::runtime_error("mesh: bad header at line " + std::to_string(line_no));
  }
  Mesh m;
  m.nodes.reserve(nv);
  for (int i = 0; i < nv; ++i) {
    if (!next_line())
      throw std::runtime_error("mesh: expected " + std::to_string(nv) + " nodes, file ended");
    std::istringstream ls(line);
    double x, y;
    int flag;
    if (!(ls >> x >> y >> flag))
      throw std::runtime_error("mesh: malformed node at line " + std::to_string(line_no));
    m.nodes.push_back({x, y});
    m.boundary_flags.push_back(flag);
  }
  for (int t = 0; t < nt; ++t) {
    if (!next_line())
      throw std::runtime_error("mesh: expected " + std::to_string(nt) + " triangles, file ended");
    std::istringstream ls(line);
    int i, j, k;
    if (!(ls >> i >> j >> k))
      throw std::runtime_error("mesh: malformed triangle at line " + std::to_string(line_no));
    m.triangles.push_back({i - 1, j - 1, k - 1});
  }
  validate_mesh(m);
  return m;
}

void save_mesh(const Mesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("mesh: cannot write '" + path + "'");
  char buf[128];
  out << m.num_nodes() << ' ' << m.num_triangles() << '\n';
  for (int i = 0; i < m.num_nodes(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %d\n", m.nodes[i][0], m.nodes[i][1],
                  m.boundary_flags[i]);
    out << buf;
  }
  for (const auto& tri : m.triangles)
    out << tri[0] + 1 << ' ' << tri[1] + 1 << ' ' << tri[2] + 1 << '\n';
}

}  // namespace gpde
