#pragma once

#include <memory>
#include <vector>

#include "stbiot/dof_map.hpp"
#include "stbiot/mesh.hpp"
#include "stbiot/problem.hpp"

namespace stbiot {

struct FormMatrices {
  SparseMatrix mass_v;      // rho-weighted vector mass, R x R
  SparseMatrix mass_q;      // c0-weighted scalar mass, S x S
  SparseMatrix elasticity;  // A including Nitsche and directional terms, R x R
  SparseMatrix coupling;    // C(psi_j, xi_r), S x R
  SparseMatrix pressure;    // B (CG + Nitsche or SIP), S x S
  SparseMatrix divergence;  // <div psi_j, xi_r>, S x R
};

// One mesh level with its spaces, parameters and boundary tags.
class Discretization {
 public:
  Discretization(const MeshLevel& level, std::vector<BoundaryTags> tags, Pair pair, int r, int k,
                 const MaterialParams& material, const NitscheParams& nitsche, HfMode hf_mode = HfMode::measure);

  const MeshLevel& mesh() const { return *mesh_; }
  const DofMap& dofs() const { return dofs_; }
  const MaterialParams& material() const { return material_; }
  const NitscheParams& nitsche() const { return nitsche_; }
  const std::vector<BoundaryTags>& tags() const { return tags_; }
  int dim() const { return mesh_->dim; }
  double h_face(int f) const { return h_face_[f]; }
  // SIP penalty for qpdisc, gamma_b for qq.
  double pressure_penalty() const;

  FormMatrices assemble_forms() const;

  // F_gamma (size R) and G_gamma (size S) at time t.
  void functionals(const ProblemData& data, double t, Vector& F, Vector& G) const;
  // <w . n, xi_r> over Dirichlet and directional u-faces, size S.
  Vector normal_flux(const VectorFn& w, double t) const;

  // L2 projections onto V_h (interleaved components) and Q_h.
  Vector project_vector(const VectorFn& f, double t) const;
  Vector project_scalar(const ScalarFn& f, double t) const;

  // Unweighted mass matrices of the scalar spaces.
  const SparseMatrix& scalar_mass_v() const;
  const SparseMatrix& scalar_mass_q() const;

 private:
  struct Cache;
  const MeshLevel* mesh_;
  std::vector<BoundaryTags> tags_;
  DofMap dofs_;
  MaterialParams material_;
  NitscheParams nitsche_;
  HfMode hf_mode_;
  std::vector<double> h_face_;
  std::shared_ptr<Cache> cache_;
};

FormMatrices assemble_forms(const Discretization& disc);

// Coordinate text dump "row col value" of a sparse matrix and a vector.
void write_coo(const SparseMatrix& A, const std::string& path);
void write_vector(const Vector& v, const std::string& path);

}  // namespace stbiot
