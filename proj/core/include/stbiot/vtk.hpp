#pragma once

#include <string>

#include "stbiot/forms.hpp"
#include "stbiot/slab.hpp"

namespace stbiot {

// Legacy ASCII VTK of u and p at the cell corners. Points are duplicated per cell so
// discontinuous pressures are shown without averaging.
void write_vtk_fields(const Discretization& disc, const TraceState& state, const std::string& path);

}  // namespace stbiot
