#include "ripple/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "ripple/error.hpp"

namespace ripple {

namespace {

void add_polygon(RawMesh& mesh, const std::vector<std::uint32_t>& poly) {
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) mesh.faces.push_back({poly[0], poly[k], poly[k + 1]});
}

std::string lowercase_extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return {};
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace

RawMesh read_obj(std::istream& in) {
  RawMesh mesh;
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::uint32_t> poly;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Vec3 p{};
      if (!(ls >> p[0] >> p[1] >> p[2])) {
        throw Error(ErrorCode::FormatError, "bad vertex record on line " + std::to_string(lineno));
      }
      mesh.vertices.push_back(p);
    } else if (tag == "f") {
      poly.clear();
      std::string ref;
      while (ls >> ref) {
        // "i", "i/t", "i//n", "i/t/n"; only the position index matters.
        long long idx = 0;
        const auto slash = ref.find('/');
        const auto head = ref.substr(0, slash);
        auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
        if (ec != std::errc() || ptr != head.data() + head.size() || idx == 0) {
          throw Error(ErrorCode::FormatError, "bad face index '" + ref + "' on line " + std::to_string(lineno));
        }
        const long long n = static_cast<long long>(mesh.vertices.size());
        const long long zero_based = idx > 0 ? idx - 1 : n + idx;
        if (zero_based < 0 || zero_based >= n) {
          throw Error(ErrorCode::FormatError, "face index out of range on line " + std::to_string(lineno));
        }
        poly.push_back(static_cast<std::uint32_t>(zero_based));
      }
      if (poly.size() < 3) {
        throw Error(ErrorCode::FormatError, "face with fewer than 3 vertices on line " + std::to_string(lineno));
      }
      add_polygon(mesh, poly);
    }
  }
  return mesh;
}

RawMesh read_ply(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0) throw Error(ErrorCode::FormatError, "missing ply magic");

  struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<std::string> props;  // "list" properties recorded as "list:<name>"
  };
  std::vector<Element> elements;
  bool ascii = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "format") {
      std::string fmt;
      ls >> fmt;
      ascii = fmt == "ascii";
    } else if (word == "element") {
      Element e;
      ls >> e.name >> e.count;
      elements.push_back(e);
    } else if (word == "property") {
      if (elements.empty()) throw Error(ErrorCode::FormatError, "property before element");
      std::string type;
      ls >> type;
      std::string name;
      if (type == "list") {
        std::string count_type, item_type;
        ls >> count_type >> item_type >> name;
        name = "list:" + name;
      } else {
        ls >> name;
      }
      elements.back().props.push_back(name);
    } else if (word == "end_header") {
      break;
    }
  }
  if (!ascii) throw Error(ErrorCode::FormatError, "only ascii PLY is supported");

  RawMesh mesh;
  std::vector<std::uint32_t> poly;
  for (const auto& e : elements) {
    for (std::size_t row = 0; row < e.count; ++row) {
      if (!std::getline(in, line)) throw Error(ErrorCode::FormatError, "PLY body ends early in " + e.name);
      std::istringstream ls(line);
      if (e.name == "vertex") {
        Vec3 p{};
        for (const auto& prop : e.props) {
          double value = 0;
          if (prop.rfind("list:", 0) == 0) {
            std::size_t n = 0;
            ls >> n;
            for (std::size_t k = 0; k < n; ++k) ls >> value;
            continue;
          }
          ls >> value;
          if (prop == "x") p[0] = value;
          if (prop == "y") p[1] = value;
          if (prop == "z") p[2] = value;
        }
        if (!ls) throw Error(ErrorCode::FormatError, "bad PLY vertex row " + std::to_string(row));
        mesh.vertices.push_back(p);
      } else if (e.name == "face") {
        poly.clear();
        for (const auto& prop : e.props) {
          if (prop == "list:vertex_indices" || prop == "list:vertex_index") {
            std::size_t n = 0;
            ls >> n;
            for (std::size_t k = 0; k < n; ++k) {
              long long v = -1;
              ls >> v;
              if (v < 0) throw Error(ErrorCode::FormatError, "bad PLY face row " + std::to_string(row));
              poly.push_back(static_cast<std::uint32_t>(v));
            }
          } else if (prop.rfind("list:", 0) == 0) {
            std::size_t n = 0;
            ls >> n;
            for (std::size_t k = 0; k < n; ++k) {
              double skip;
              ls >> skip;
            }
          } else {
            double skip;
            ls >> skip;
          }
        }
        if (!ls || poly.size() < 3) throw Error(ErrorCode::FormatError, "bad PLY face row " + std::to_string(row));
        add_polygon(mesh, poly);
      }
    }
  }
  mesh.validate();
  return mesh;
}

RawMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  const auto ext = lowercase_extension(path);
  if (ext == "obj") {
    auto mesh = read_obj(in);
    mesh.validate();
    return mesh;
  }
  if (ext == "ply") return read_ply(in);
  throw Error(ErrorCode::IoError, "unsupported mesh extension '" + ext + "' for '" + path + "'");
}

void write_obj(std::ostream& out, const RawMesh& mesh) {
  out << std::setprecision(17);
  for (const auto& p : mesh.vertices) out << "v " << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

void write_obj(const std::string& path, const RawMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  write_obj(out, mesh);
}

RawMesh dequantize_mesh(const QuantizedMesh& mesh) {
  RawMesh out;
  out.vertices.reserve(mesh.vertices.size());
  for (const auto& q : mesh.vertices) out.vertices.push_back(mesh.normalization.to_model(mesh.dequantize(q)));
  out.faces = mesh.faces;
  return out;
}

}  // namespace ripple
