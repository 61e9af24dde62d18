#pragma once

// Legacy-VTK ASCII output: the triangulation as an unstructured grid, velocity
// sampled at vertices as point vectors, and vorticity recovered into P1 as a
// point scalar.

#include "nsfem/fe_space.hpp"

#include <iosfwd>
#include <string>

namespace nsfem {

void write_mesh_vtk(const Mesh& mesh, std::ostream& os, const std::string& title = "mesh");

// L2 projection of (d u2/dx - d u1/dy) onto P1.
Field recover_vorticity(const Field& velocity, std::shared_ptr<const FESpace> p1space);

// Mesh plus velocity vectors and vorticity scalars as POINT_DATA.
void write_snapshot_vtk(const Field& velocity, const Field& vorticity, std::ostream& os,
                        const std::string& title = "snapshot");

void write_mesh_vtk_file(const Mesh& mesh, const std::string& path);
void write_snapshot_vtk_file(const Field& velocity, const Field& vorticity, const std::string& path);

} // namespace nsfem
