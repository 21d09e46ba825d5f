#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cdg/mesh.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_cdg, m) {
    m.doc() = "characteristic discontinuous Galerkin tracer transport";

    py::class_<cdg::HorizontalMesh>(m, "Mesh")
        .def_property_readonly("ncells", &cdg::HorizontalMesh::ncells)
        .def_property_readonly("nedges", &cdg::HorizontalMesh::nedges)
        .def_property_readonly("nverts", &cdg::HorizontalMesh::nverts)
        .def("validate", &cdg::HorizontalMesh::validate)
        .def("min_spacing", &cdg::HorizontalMesh::min_spacing)
        .def("to_json", [](const cdg::HorizontalMesh& mesh) { return cdg::mesh_to_json(mesh); });

    m.def("hex_mesh", &cdg::build_planar_hex_mesh, py::arg("nx"), py::arg("ny"), py::arg("dx"),
          "doubly periodic hexagonal mesh");
    m.def("icosahedral_mesh", &cdg::build_icosahedral_mesh, py::arg("level"),
          py::arg("radius") = 6.37122e6, "spherical icosahedral Voronoi mesh");
    m.def("load_mesh", &cdg::load_mesh, py::arg("path"));
}
