#pragma once

#include "hoi/geometry/mesh.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace hoi {

namespace detail {

inline std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
    return in;
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    out << std::setprecision(17);
    return out;
}

inline std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

}  // namespace detail

/// Wavefront OBJ: `v` and `f` records. Polygons are fan-triangulated;
/// texture/normal indices are ignored.
inline TriangleMesh read_obj(const std::filesystem::path& path) {
    auto in = detail::open_for_read(path);
    TriangleMesh mesh;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x() >> p.y() >> p.z())) fail(ErrorKind::Io, path.string() + ":" + std::to_string(line_no) + ": bad vertex");
            mesh.vertices.push_back(p);
        } else if (tag == "f") {
            std::vector<std::uint32_t> poly;
            std::string tok;
            while (ls >> tok) {
                const long idx = std::stol(tok.substr(0, tok.find('/')));
                const long resolved = idx < 0 ? static_cast<long>(mesh.vertices.size()) + idx : idx - 1;
                if (resolved < 0) fail(ErrorKind::Io, path.string() + ":" + std::to_string(line_no) + ": bad face index");
                poly.push_back(static_cast<std::uint32_t>(resolved));
            }
            for (std::size_t i = 1; i + 1 < poly.size(); ++i) mesh.faces.push_back({poly[0], poly[i], poly[i + 1]});
        }
    }
    mesh.validate();
    mesh.update_normals();
    return mesh;
}

inline void write_obj(const TriangleMesh& mesh, const std::filesystem::path& path) {
    auto out = detail::open_for_write(path);
    for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

/// ASCII PLY with `vertex` (x y z first) and `face` (vertex_indices list).
inline TriangleMesh read_ply(const std::filesystem::path& path) {
    auto in = detail::open_for_read(path);
    std::string line;
    std::getline(in, line);
    if (line.rfind("ply", 0) != 0) fail(ErrorKind::Io, path.string() + ": not a PLY file");
    std::size_t n_vertices = 0, n_faces = 0, vertex_props = 0;
    std::string current;
    bool ascii = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "format") {
            std::string fmt;
            ls >> fmt;
            ascii = fmt == "ascii";
        } else if (tag == "element") {
            std::size_t count = 0;
            ls >> current >> count;
            if (current == "vertex") n_vertices = count;
            if (current == "face") n_faces = count;
        } else if (tag == "property" && current == "vertex") {
            ++vertex_props;
        } else if (tag == "end_header") {
            break;
        }
    }
    if (!ascii) fail(ErrorKind::Io, path.string() + ": only ASCII PLY is supported");
    TriangleMesh mesh;
    mesh.vertices.reserve(n_vertices);
    for (std::size_t i = 0; i < n_vertices; ++i) {
        if (!std::getline(in, line)) fail(ErrorKind::Io, path.string() + ": truncated vertex list");
        std::istringstream ls(line);
        Vec3 p;
        if (!(ls >> p.x() >> p.y() >> p.z())) fail(ErrorKind::Io, path.string() + ": bad vertex record");
        mesh.vertices.push_back(p);
    }
    for (std::size_t i = 0; i < n_faces; ++i) {
        if (!std::getline(in, line)) fail(ErrorKind::Io, path.string() + ": truncated face list");
        std::istringstream ls(line);
        std::size_t count = 0;
        ls >> count;
        std::vector<std::uint32_t> poly(count);
        for (auto& v : poly) ls >> v;
        if (!ls) fail(ErrorKind::Io, path.string() + ": bad face record");
        for (std::size_t k = 1; k + 1 < poly.size(); ++k) mesh.faces.push_back({poly[0], poly[k], poly[k + 1]});
    }
    (void)vertex_props;
    mesh.validate();
    mesh.update_normals();
    return mesh;
}

inline void write_ply(const TriangleMesh& mesh, const std::filesystem::path& path) {
    auto out = detail::open_for_write(path);
    out << "ply\nformat ascii 1.0\nelement vertex " << mesh.vertices.size()
        << "\nproperty double x\nproperty double y\nproperty double z\nelement face " << mesh.faces.size()
        << "\nproperty list uchar int vertex_indices\nend_header\n";
    for (const auto& v : mesh.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    for (const auto& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

inline TriangleMesh read_mesh(const std::filesystem::path& path) {
    const auto ext = detail::lower_extension(path);
    if (ext == ".obj") return read_obj(path);
    if (ext == ".ply") return read_ply(path);
    fail(ErrorKind::Io, "unsupported mesh format: " + path.string());
}

inline void write_mesh(const TriangleMesh& mesh, const std::filesystem::path& path) {
    const auto ext = detail::lower_extension(path);
    if (ext == ".ply") return write_ply(mesh, path);
    write_obj(mesh, path);
}

/// Sidecar label path: `chair.obj` -> `chair.obj.parts`.
inline std::filesystem::path parts_path_for(const std::filesystem::path& mesh_path) {
    return mesh_path.string() + ".parts";
}

/// Label sidecar: a header block of `# <id> <name>` lines, then one integer
/// label per vertex line.
inline void read_parts(const std::filesystem::path& path, PartLabeledMesh& out) {
    auto in = detail::open_for_read(path);
    out.part_names.clear();
    out.part_of_vertex.clear();
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            PartId id;
            if (!(ls >> id)) continue;  // free-form comment
            std::string name;
            std::getline(ls >> std::ws, name);
            out.part_names[id] = name;
        } else {
            out.part_of_vertex.push_back(std::stoi(line));
        }
    }
}

inline void write_parts(const PartLabeledMesh& m, const std::filesystem::path& path) {
    auto out = detail::open_for_write(path);
    for (const auto& [id, name] : m.part_names) out << "# " << id << ' ' << name << '\n';
    for (auto p : m.part_of_vertex) out << p << '\n';
}

inline PartLabeledMesh read_labeled_mesh(const std::filesystem::path& mesh_path) {
    PartLabeledMesh m;
    m.mesh = read_mesh(mesh_path);
    read_parts(parts_path_for(mesh_path), m);
    m.validate();
    return m;
}

inline void write_labeled_mesh(const PartLabeledMesh& m, const std::filesystem::path& mesh_path) {
    write_mesh(m.mesh, mesh_path);
    write_parts(m, parts_path_for(mesh_path));
}

}  // namespace hoi
