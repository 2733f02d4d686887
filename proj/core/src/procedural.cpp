#include "ripple/procedural.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <utility>

namespace ripple::procedural {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 normalized(const Vec3& p, double radius) {
  const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  return {p[0] / n * radius, p[1] / n * radius, p[2] / n * radius};
}

std::uint32_t idx(std::size_t i) { return static_cast<std::uint32_t>(i); }

}  // namespace

RawMesh icosphere(int subdivisions, double radius) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  RawMesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : m.vertices) v = normalized(v, radius);
  m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
             {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
             {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mid;
    auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      const auto& pa = m.vertices[a];
      const auto& pb = m.vertices[b];
      m.vertices.push_back(normalized({pa[0] + pb[0], pa[1] + pb[1], pa[2] + pb[2]}, radius));
      const auto id = idx(m.vertices.size() - 1);
      mid.emplace(key, id);
      return id;
    };
    std::vector<Tri> next;
    next.reserve(m.faces.size() * 4);
    for (const auto& f : m.faces) {
      const auto a = midpoint(f[0], f[1]);
      const auto b = midpoint(f[1], f[2]);
      const auto c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    m.faces = std::move(next);
  }
  return m;
}

RawMesh torus(int major_segments, int minor_segments, double major_radius, double minor_radius) {
  RawMesh m;
  for (int i = 0; i < major_segments; ++i) {
    const double u = 2 * kPi * i / major_segments;
    for (int j = 0; j < minor_segments; ++j) {
      const double v = 2 * kPi * j / minor_segments;
      const double r = major_radius + minor_radius * std::cos(v);
      m.vertices.push_back({r * std::cos(u), r * std::sin(u), minor_radius * std::sin(v)});
    }
  }
  auto at = [&](int i, int j) {
    return idx(static_cast<std::size_t>((i % major_segments) * minor_segments + (j % minor_segments)));
  };
  for (int i = 0; i < major_segments; ++i) {
    for (int j = 0; j < minor_segments; ++j) {
      m.faces.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
      m.faces.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
    }
  }
  return m;
}

RawMesh grid_patch(int nx, int ny, double amplitude) {
  RawMesh m;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const double x = static_cast<double>(i) / nx;
      const double y = static_cast<double>(j) / ny;
      m.vertices.push_back({x, y, amplitude * std::sin(2 * kPi * x) * std::cos(kPi * y)});
    }
  }
  auto at = [&](int i, int j) { return idx(static_cast<std::size_t>(j * (nx + 1) + i)); };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      m.faces.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
      m.faces.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
    }
  }
  return m;
}

RawMesh open_cylinder(int segments, int rings, double radius, double height) {
  RawMesh m;
  for (int r = 0; r <= rings; ++r) {
    for (int s = 0; s < segments; ++s) {
      const double a = 2 * kPi * s / segments;
      m.vertices.push_back({radius * std::cos(a), radius * std::sin(a), height * r / rings});
    }
  }
  auto at = [&](int r, int s) { return idx(static_cast<std::size_t>(r * segments + (s % segments))); };
  for (int r = 0; r < rings; ++r) {
    for (int s = 0; s < segments; ++s) {
      m.faces.push_back({at(r, s), at(r, s + 1), at(r + 1, s + 1)});
      m.faces.push_back({at(r, s), at(r + 1, s + 1), at(r + 1, s)});
    }
  }
  return m;
}

RawMesh nonmanifold_book(int pages, int strips_per_page) {
  RawMesh m;
  m.vertices.push_back({0, 0, 0});
  m.vertices.push_back({0, 0, 1});
  for (int p = 0; p < pages; ++p) {
    const double a = 2 * kPi * (p + 0.25) / (pages + 1);
    const Vec3 dir{std::cos(a), std::sin(a), 0};
    // Rail vertices at distances 1..strips from the spine.
    std::vector<std::uint32_t> lower{0}, upper{1};
    for (int k = 1; k <= strips_per_page; ++k) {
      const double d = static_cast<double>(k) / strips_per_page;
      lower.push_back(idx(m.vertices.size()));
      m.vertices.push_back({dir[0] * d, dir[1] * d, 0.1 * k});
      upper.push_back(idx(m.vertices.size()));
      m.vertices.push_back({dir[0] * d, dir[1] * d, 1.0 + 0.1 * k});
    }
    for (int k = 0; k < strips_per_page; ++k) {
      Tri f0{lower[k], lower[k + 1], upper[k + 1]};
      Tri f1{lower[k], upper[k + 1], upper[k]};
      if (p % 2 == 1) {
        std::swap(f0[1], f0[2]);
        std::swap(f1[1], f1[2]);
      }
      m.faces.push_back(f0);
      m.faces.push_back(f1);
    }
  }
  return m;
}

RawMesh double_cone(int segments) {
  RawMesh m;
  m.vertices.push_back({0, 0, 0});
  for (int side = 0; side < 2; ++side) {
    const double z = side == 0 ? 1.0 : -1.0;
    const auto ring = idx(m.vertices.size());
    for (int s = 0; s < segments; ++s) {
      const double a = 2 * kPi * (s + 0.5 * side) / segments;
      m.vertices.push_back({0.6 * std::cos(a), 0.6 * std::sin(a), z});
    }
    const auto cap = idx(m.vertices.size());
    m.vertices.push_back({0, 0, z});
    for (int s = 0; s < segments; ++s) {
      const auto a = ring + static_cast<std::uint32_t>(s);
      const auto b = ring + static_cast<std::uint32_t>((s + 1) % segments);
      if (side == 0) {
        m.faces.push_back({0, b, a});
        m.faces.push_back({cap, a, b});
      } else {
        m.faces.push_back({0, a, b});
        m.faces.push_back({cap, b, a});
      }
    }
  }
  return m;
}

RawMesh moebius_strip(int segments) {
  RawMesh m;
  for (int s = 0; s < segments; ++s) {
    const double u = 2 * kPi * s / segments;
    for (int side = 0; side < 2; ++side) {
      const double w = side == 0 ? -0.3 : 0.3;
      const double r = 1.0 + w * std::cos(u / 2);
      m.vertices.push_back({r * std::cos(u), r * std::sin(u), w * std::sin(u / 2)});
    }
  }
  for (int s = 0; s < segments; ++s) {
    const auto a0 = idx(2 * static_cast<std::size_t>(s));
    const auto a1 = a0 + 1;
    const bool wrap = s + 1 == segments;
    // Closing the loop swaps the rails, which is what makes the strip one-sided.
    const auto b0 = wrap ? 1u : a0 + 2;
    const auto b1 = wrap ? 0u : a0 + 3;
    m.faces.push_back({a0, b0, b1});
    m.faces.push_back({a0, b1, a1});
  }
  return m;
}

RawMesh cube() {
  RawMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
  m.faces = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7}, {0, 1, 5}, {0, 5, 4},
             {1, 2, 6}, {1, 6, 5}, {2, 3, 7}, {2, 7, 6}, {3, 0, 4}, {3, 4, 7}};
  return m;
}

RawMesh rotated(RawMesh mesh, double yaw, double pitch, double roll) {
  const double cy = std::cos(yaw), sy = std::sin(yaw);
  const double cp = std::cos(pitch), sp = std::sin(pitch);
  const double cr = std::cos(roll), sr = std::sin(roll);
  const double r[3][3] = {{cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr},
                          {sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr},
                          {-sp, cp * sr, cp * cr}};
  for (auto& v : mesh.vertices) {
    const Vec3 p = v;
    for (int i = 0; i < 3; ++i) v[i] = r[i][0] * p[0] + r[i][1] * p[1] + r[i][2] * p[2];
  }
  return mesh;
}

RawMesh translated(RawMesh mesh, const Vec3& offset) {
  for (auto& v : mesh.vertices) {
    for (int i = 0; i < 3; ++i) v[i] += offset[i];
  }
  return mesh;
}

RawMesh concatenated(const std::vector<RawMesh>& parts) {
  RawMesh out;
  for (const auto& p : parts) {
    const auto base = idx(out.vertices.size());
    out.vertices.insert(out.vertices.end(), p.vertices.begin(), p.vertices.end());
    for (const auto& f : p.faces) out.faces.push_back({f[0] + base, f[1] + base, f[2] + base});
  }
  return out;
}

RawMesh assembly(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  std::vector<RawMesh> parts;
  const int columns = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
  for (int k = 0; k < count; ++k) {
    RawMesh shape;
    switch (k % 3) {
      case 0: shape = translated(cube(), {-0.5, -0.5, -0.5}); break;
      case 1: shape = icosphere(1, 0.6); break;
      default: shape = torus(8, 6, 0.45, 0.15); break;
    }
    shape = rotated(std::move(shape), angle(rng), angle(rng), angle(rng));
    parts.push_back(translated(std::move(shape), {2.0 * (k % columns), 2.0 * (k / columns), 0.4 * (k % 2)}));
  }
  return concatenated(parts);
}

std::vector<CorpusEntry> corpus() {
  std::vector<CorpusEntry> out;
  for (int level = 1; level <= 3; ++level) {
    for (int variant = 0; variant < 3; ++variant) {
      out.push_back({"icosphere_l" + std::to_string(level) + "_v" + std::to_string(variant),
                     rotated(icosphere(level), 0.3 * variant, 0.7 * variant, 0.2 * variant)});
    }
  }
  const int torus_params[][2] = {{12, 8}, {16, 10}, {24, 12}, {32, 16}, {40, 12}, {48, 20}};
  for (const auto& p : torus_params) {
    out.push_back({"torus_" + std::to_string(p[0]) + "x" + std::to_string(p[1]), torus(p[0], p[1])});
  }
  const int grid_params[][2] = {{4, 4}, {10, 10}, {16, 8}, {20, 20}, {30, 12}, {40, 40}};
  for (std::size_t g = 0; g < std::size(grid_params); ++g) {
    const auto& p = grid_params[g];
    out.push_back({"grid_" + std::to_string(p[0]) + "x" + std::to_string(p[1]),
                   grid_patch(p[0], p[1], g % 2 == 0 ? 0.0 : 0.15)});
  }
  const int cylinder_params[][2] = {{8, 2}, {12, 4}, {16, 6}, {24, 8}, {32, 10}, {48, 16}};
  for (const auto& p : cylinder_params) {
    out.push_back({"cylinder_" + std::to_string(p[0]) + "x" + std::to_string(p[1]), open_cylinder(p[0], p[1])});
  }
  for (int pages = 3; pages <= 5; ++pages) {
    out.push_back({"book_" + std::to_string(pages) + "p", nonmanifold_book(pages, 2 + pages)});
  }
  out.push_back({"double_cone_8", double_cone(8)});
  out.push_back({"double_cone_16", double_cone(16)});
  out.push_back({"cube", cube()});
  for (int k = 2; k <= 20; ++k) {
    out.push_back({"assembly_" + std::to_string(k), assembly(k, 1000 + static_cast<std::uint64_t>(k))});
  }
  return out;
}

}  // namespace ripple::procedural
