#include <fstream>

#include <json.hpp>

#include "cdg/mesh.hpp"

namespace cdg {

using nlohmann::json;

std::string mesh_to_json(const HorizontalMesh& m) {
    json j;
    j["kind"] = m.kind == GeometryKind::Sphere ? "sphere" : "planar_periodic";
    if (m.kind == GeometryKind::Sphere) {
        j["radius"] = m.R;
    } else {
        j["Lx"] = m.Lx;
        j["Ly"] = m.Ly;
    }
    auto dump_points = [](const std::vector<Vec3>& pts) {
        json arr = json::array();
        for (const auto& p : pts) arr.push_back({p.x, p.y, p.z});
        return arr;
    };
    j["centers"] = dump_points(m.center);
    j["vertices"] = dump_points(m.vert);
    j["cells"] = m.cell_verts;
    json ed = json::array();
    for (const auto& e : m.edges) ed.push_back({e.v1, e.v2, e.km, e.kp});
    j["edges"] = ed;
    return j.dump(1);
}

HorizontalMesh mesh_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& ex) {
        throw MeshError(std::string("mesh JSON parse failure: ") + ex.what());
    }
    HorizontalMesh m;
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "sphere") {
            m.kind = GeometryKind::Sphere;
            m.R = j.at("radius").get<double>();
        } else if (kind == "planar_periodic") {
            m.kind = GeometryKind::PlanarPeriodic;
            m.Lx = j.at("Lx").get<double>();
            m.Ly = j.at("Ly").get<double>();
        } else {
            throw MeshError("unknown mesh kind: " + kind);
        }
        auto read_points = [](const json& arr, std::vector<Vec3>& out) {
            out.reserve(arr.size());
            for (const auto& p : arr)
                out.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
        };
        read_points(j.at("centers"), m.center);
        read_points(j.at("vertices"), m.vert);
        m.cell_verts = j.at("cells").get<std::vector<std::vector<int>>>();
        for (const auto& e : j.at("edges")) {
            m.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(),
                               e.at(2).get<int>(), e.at(3).get<int>()});
        }
    } catch (const json::exception& ex) {
        throw MeshError(std::string("mesh JSON is missing fields: ") + ex.what());
    }
    finalize_mesh(m);
    m.validate();
    return m;
}

void save_mesh(const HorizontalMesh& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw MeshError("cannot open mesh file for writing: " + path);
    out << mesh_to_json(m) << "\n";
}

HorizontalMesh load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open mesh file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return mesh_from_json(text);
}

} // namespace cdg
