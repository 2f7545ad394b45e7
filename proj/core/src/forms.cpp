#include "stbiot/forms.hpp"

#include <Eigen/SparseCholesky>
#include <fstream>
#include <iostream>

#include "fe_internal.hpp"

namespace stbiot {

using detail::CellGeom;
using detail::cell_geom;
using detail::face_jac;
using detail::face_tables;
using detail::to_physical;

struct Discretization::Cache {
  SparseMatrix mass_v, mass_q;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solve_v, solve_q;
  bool ready = false;
};

Discretization::Discretization(const MeshLevel& level, std::vector<BoundaryTags> tags, Pair pair, int r, int k,
                               const MaterialParams& material, const NitscheParams& nitsche, HfMode hf_mode)
    : mesh_(&level), tags_(std::move(tags)), dofs_(level, pair, r, k), material_(material), nitsche_(nitsche),
      hf_mode_(hf_mode), cache_(std::make_shared<Cache>()) {
  if (tags_.size() != level.faces.size()) throw Error("boundary tag table does not match the face count");
  h_face_.resize(level.faces.size());
  for (std::size_t f = 0; f < level.faces.size(); ++f) h_face_[f] = face_length_scale(level, level.faces[f], hf_mode);
  bool has_dirichlet_u = false;
  for (int f : level.boundary_faces) has_dirichlet_u |= tags_[f].u != UTag::neumann;
  if (has_dirichlet_u && nitsche_.gamma_a == 0.0)
    std::cerr << "warning: gamma_a = 0 with Dirichlet displacement faces; A may lose coercivity\n";
}

double Discretization::pressure_penalty() const {
  return dofs_.pair() == Pair::qq ? nitsche_.gamma_b : nitsche_.gamma;
}

namespace {

// K * grad (physical) dotted with n, and K grad . grad.
inline double kdotn(const Mat3& K, const double* g, const Vec3& n, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b) s += n[a] * K[a][b] * g[b];
  return s;
}

struct PhysTable {
  // Physical values/gradients of one cell at quadrature points.
  int nq = 0, nb = 0;
  const double* val = nullptr;
  std::vector<double> grad;  // [(q*nb + i)*3 + d]
  void build(const ElementTable& t, const CellGeom& g, int dim) {
    nq = t.nq;
    nb = t.nb;
    val = t.values.data();
    grad.assign(t.gradients.begin(), t.gradients.end());
    for (int q = 0; q < nq; ++q)
      for (int i = 0; i < nb; ++i)
        for (int d = 0; d < dim; ++d) grad[(q * nb + i) * 3 + d] /= g.hs[d];
  }
  double v(int q, int i) const { return val[q * nb + i]; }
  const double* g(int q, int i) const { return &grad[(q * nb + i) * 3]; }
};

}  // namespace

FormMatrices Discretization::assemble_forms() const {
  const MeshLevel& m = *mesh_;
  const int dim = m.dim;
  const auto& V = dofs_.vspace();
  const auto& Q = dofs_.qspace();
  const int r = dofs_.r();
  const int nbv = V.dofs_per_cell();
  const int nbq = Q.dofs_per_cell();
  const int nv = nbv * dim;
  const double rho = material_.rho, c0 = material_.c0, alpha = material_.alpha;
  const double lam = material_.lambda, mu = material_.mu;
  const Mat3& K = material_.K;

  const QuadratureRule vrule = gauss_rule(r + 1, dim);
  std::vector<Point> qp(vrule.points.begin(), vrule.points.end());
  const ElementTable tv = tabulate(V.element(), qp);
  const ElementTable tq = tabulate(Q.element(), qp);
  const auto fv = face_tables(V.element(), r + 1);
  const auto fq = face_tables(Q.element(), r + 1);

  std::vector<Triplet> tMV, tMQ, tA, tC, tB, tD;
  std::vector<int> vd;
  PhysTable pv, pq;
  DenseMatrix Aloc(nv, nv), Mvloc(nbv, nbv), Mqloc(nbq, nbq), Bloc(nbq, nbq), Dloc(nbq, nv);

  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
    const CellGeom g = cell_geom(m, c);
    pv.build(tv, g, dim);
    pq.build(tq, g, dim);
    Aloc.setZero();
    Mvloc.setZero();
    Mqloc.setZero();
    Bloc.setZero();
    Dloc.setZero();
    for (int q = 0; q < tv.nq; ++q) {
      const double w = vrule.weights[q] * g.jac;
      for (int i = 0; i < nbv; ++i) {
        const double* gi = pv.g(q, i);
        for (int j = 0; j < nbv; ++j) {
          const double* gj = pv.g(q, j);
          Mvloc(i, j) += w * pv.v(q, i) * pv.v(q, j);
          double dot = 0.0;
          for (int d = 0; d < dim; ++d) dot += gi[d] * gj[d];
          for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
              Aloc(i * dim + a, j * dim + b) +=
                  w * (mu * ((a == b ? dot : 0.0) + gi[b] * gj[a]) + lam * gi[a] * gj[b]);
        }
      }
      for (int s = 0; s < nbq; ++s) {
        for (int t = 0; t < nbq; ++t) {
          Mqloc(s, t) += w * pq.v(q, s) * pq.v(q, t);
          double kg = 0.0;
          for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) kg += pq.g(q, s)[a] * K[a][b] * pq.g(q, t)[b];
          Bloc(s, t) += w * kg;
        }
        for (int j = 0; j < nbv; ++j)
          for (int b = 0; b < dim; ++b) Dloc(s, j * dim + b) += w * pq.v(q, s) * pv.g(q, j)[b];
      }
    }
    dofs_.cell_vector_dofs(c, vd);
    const int* qd = Q.cell_dofs(c);
    const int* nd = V.cell_dofs(c);
    for (int i = 0; i < nbv; ++i)
      for (int j = 0; j < nbv; ++j)
        for (int a = 0; a < dim; ++a) tMV.emplace_back(nd[i] * dim + a, nd[j] * dim + a, rho * Mvloc(i, j));
    for (int i = 0; i < nv; ++i)
      for (int j = 0; j < nv; ++j) tA.emplace_back(vd[i], vd[j], Aloc(i, j));
    for (int s = 0; s < nbq; ++s) {
      for (int t = 0; t < nbq; ++t) {
        tMQ.emplace_back(qd[s], qd[t], c0 * Mqloc(s, t));
        tB.emplace_back(qd[s], qd[t], Bloc(s, t));
      }
      for (int j = 0; j < nv; ++j) {
        tD.emplace_back(qd[s], vd[j], Dloc(s, j));
        tC.emplace_back(qd[s], vd[j], -alpha * Dloc(s, j));
      }
    }
  }

  // Face terms.
  const double gp = pressure_penalty();
  std::vector<int> vd2;
  for (int f = 0; f < static_cast<int>(m.faces.size()); ++f) {
    const Face& face = m.faces[f];
    const Vec3 n = face.normal();
    const double hF = h_face_[f];
    const int cp = face.cell_plus;
    const CellGeom g = cell_geom(m, cp);
    const double fj = face_jac(g, dim, face.axis);
    const auto& rule = fv.rule;

    if (face.boundary()) {
      const BoundaryTags tag = tags_[f];
      pv.build(fv.get(face.axis, face.normal_sign), g, dim);
      pq.build(fq.get(face.axis, face.normal_sign), g, dim);
      dofs_.cell_vector_dofs(cp, vd);
      const int* qd = Q.cell_dofs(cp);
      if (tag.u != UTag::neumann) {
        Aloc.setZero();
        DenseMatrix Cb = DenseMatrix::Zero(nbq, nv);
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const double w = rule.weights[q] * fj;
          for (int i = 0; i < nbv; ++i) {
            const double* gi = pv.g(q, i);
            const double dni = kdotn(Mat3{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}, gi, n, dim);
            for (int j = 0; j < nbv; ++j) {
              const double* gj = pv.g(q, j);
              const double dnj = gj[face.axis] * n[face.axis];
              const double pi = pv.v(q, i), pj = pv.v(q, j);
              for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b) {
                  double val;
                  if (tag.u == UTag::dirichlet) {
                    // Traction of trial (j,b) tested with (i,a), and the transposed term.
                    const double Tj = mu * ((a == b ? dnj : 0.0) + n[b] * gj[a]) + lam * n[a] * gj[b];
                    const double Ti = mu * ((a == b ? dni : 0.0) + n[a] * gi[b]) + lam * n[b] * gi[a];
                    val = -pi * Tj - pj * Ti + (a == b ? nitsche_.gamma_a / hF * pi * pj : 0.0);
                  } else {
                    const double Tnj = 2.0 * mu * n[b] * dnj + lam * gj[b];
                    const double Tni = 2.0 * mu * n[a] * dni + lam * gi[a];
                    val = -Tnj * pi * n[a] - pj * n[b] * Tni + nitsche_.gamma_a / hF * pi * n[a] * pj * n[b];
                  }
                  Aloc(i * dim + a, j * dim + b) += w * val;
                }
            }
          }
          for (int s = 0; s < nbq; ++s)
            for (int j = 0; j < nbv; ++j)
              for (int b = 0; b < dim; ++b) Cb(s, j * dim + b) += w * alpha * pq.v(q, s) * pv.v(q, j) * n[b];
        }
        for (int i = 0; i < nv; ++i)
          for (int j = 0; j < nv; ++j) tA.emplace_back(vd[i], vd[j], Aloc(i, j));
        for (int s = 0; s < nbq; ++s)
          for (int j = 0; j < nv; ++j) tC.emplace_back(qd[s], vd[j], Cb(s, j));
      }
      if (tag.p == PTag::dirichlet) {
        Bloc.setZero();
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const double w = rule.weights[q] * fj;
          for (int s = 0; s < nbq; ++s)
            for (int t = 0; t < nbq; ++t) {
              const double kns = kdotn(K, pq.g(q, s), n, dim), knt = kdotn(K, pq.g(q, t), n, dim);
              Bloc(s, t) += w * (-knt * pq.v(q, s) - pq.v(q, t) * kns + gp / hF * pq.v(q, s) * pq.v(q, t));
            }
        }
        for (int s = 0; s < nbq; ++s)
          for (int t = 0; t < nbq; ++t) tB.emplace_back(qd[s], qd[t], Bloc(s, t));
      }
    } else if (!Q.continuous()) {
      // SIP interior face: plus side at xi_axis = +1, minus side at -1.
      const int cm = face.cell_minus;
      const CellGeom gm = cell_geom(m, cm);
      PhysTable pp, pm;
      pp.build(fq.get(face.axis, 1.0), g, dim);
      pm.build(fq.get(face.axis, -1.0), gm, dim);
      const PhysTable* side[2] = {&pp, &pm};
      const double sgn[2] = {1.0, -1.0};
      const int* qdof[2] = {Q.cell_dofs(cp), Q.cell_dofs(cm)};
      for (int X = 0; X < 2; ++X)
        for (int Y = 0; Y < 2; ++Y) {
          Bloc.setZero();
          for (std::size_t q = 0; q < rule.size(); ++q) {
            const double w = rule.weights[q] * fj;
            for (int s = 0; s < nbq; ++s)    // test on side X
              for (int t = 0; t < nbq; ++t) {  // trial on side Y
                const double vs = side[X]->v(q, s), vt = side[Y]->v(q, t);
                const double fs = 0.5 * kdotn(K, side[X]->g(q, s), n, dim);
                const double ft = 0.5 * kdotn(K, side[Y]->g(q, t), n, dim);
                Bloc(s, t) += w * (-ft * sgn[X] * vs - sgn[Y] * vt * fs + gp / hF * sgn[X] * sgn[Y] * vs * vt);
              }
          }
          for (int s = 0; s < nbq; ++s)
            for (int t = 0; t < nbq; ++t) tB.emplace_back(qdof[X][s], qdof[Y][t], Bloc(s, t));
        }
    }
  }

  const int R = dofs_.R(), S = dofs_.S();
  FormMatrices F;
  F.mass_v.resize(R, R);
  F.mass_v.setFromTriplets(tMV.begin(), tMV.end());
  F.mass_q.resize(S, S);
  F.mass_q.setFromTriplets(tMQ.begin(), tMQ.end());
  F.elasticity.resize(R, R);
  F.elasticity.setFromTriplets(tA.begin(), tA.end());
  F.coupling.resize(S, R);
  F.coupling.setFromTriplets(tC.begin(), tC.end());
  F.pressure.resize(S, S);
  F.pressure.setFromTriplets(tB.begin(), tB.end());
  F.divergence.resize(S, R);
  F.divergence.setFromTriplets(tD.begin(), tD.end());
  return F;
}

FormMatrices assemble_forms(const Discretization& disc) { return disc.assemble_forms(); }

void Discretization::functionals(const ProblemData& data, double t, Vector& Fv, Vector& Gv) const {
  const MeshLevel& m = *mesh_;
  const int dim = m.dim;
  const auto& V = dofs_.vspace();
  const auto& Q = dofs_.qspace();
  const int r = dofs_.r();
  const int nbv = V.dofs_per_cell(), nbq = Q.dofs_per_cell();
  const double lam = material_.lambda, mu = material_.mu, alpha = material_.alpha;
  const Mat3& K = material_.K;
  Fv.setZero(dofs_.R());
  Gv.setZero(dofs_.S());

  const QuadratureRule vrule = gauss_rule(r + 2, dim);
  std::vector<Point> qp(vrule.points.begin(), vrule.points.end());
  const ElementTable tv = tabulate(V.element(), qp);
  const ElementTable tq = tabulate(Q.element(), qp);
  PhysTable pv, pq;

  if (data.body_force || data.source) {
    for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
      const CellGeom g = cell_geom(m, c);
      const int* nd = V.cell_dofs(c);
      const int* qd = Q.cell_dofs(c);
      for (int q = 0; q < tv.nq; ++q) {
        const double w = vrule.weights[q] * g.jac;
        const Point x = to_physical(g, qp[q], dim);
        if (data.body_force) {
          const Vec3 f = data.body_force(x, t);
          for (int i = 0; i < nbv; ++i)
            for (int a = 0; a < dim; ++a) Fv[nd[i] * dim + a] += w * f[a] * tv.value(q, i);
        }
        if (data.source) {
          const double gs = data.source(x, t);
          for (int s = 0; s < nbq; ++s) Gv[qd[s]] += w * gs * tq.value(q, s);
        }
      }
    }
  }

  const auto fv = face_tables(V.element(), r + 2);
  const auto fq = face_tables(Q.element(), r + 2);
  const double gp = pressure_penalty();
  for (int f : m.boundary_faces) {
    const Face& face = m.faces[f];
    const BoundaryTags tag = tags_[f];
    const Vec3 n = face.normal();
    const double hF = h_face_[f];
    const int c = face.cell_plus;
    const CellGeom g = cell_geom(m, c);
    const double fj = face_jac(g, dim, face.axis);
    pv.build(fv.get(face.axis, face.normal_sign), g, dim);
    pq.build(fq.get(face.axis, face.normal_sign), g, dim);
    const auto pts = detail::face_points(fv.rule, dim, face.axis, face.normal_sign);
    const int* nd = V.cell_dofs(c);
    const int* qd = Q.cell_dofs(c);
    for (std::size_t q = 0; q < fv.rule.size(); ++q) {
      const double w = fv.rule.weights[q] * fj;
      const Point x = to_physical(g, pts[q], dim);
      if (tag.u == UTag::neumann) {
        if (data.traction) {
          const Vec3 tn = data.traction(x, t);
          for (int i = 0; i < nbv; ++i)
            for (int a = 0; a < dim; ++a) Fv[nd[i] * dim + a] -= w * tn[a] * pv.v(q, i);
        }
      } else {
        const Vec3 uD = eval(data.u_dirichlet, x, t);
        const Vec3 vD = eval(data.v_dirichlet, x, t);
        double un = 0.0, vn = 0.0;
        for (int a = 0; a < dim; ++a) {
          un += uD[a] * n[a];
          vn += vD[a] * n[a];
        }
        for (int i = 0; i < nbv; ++i) {
          const double* gi = pv.g(q, i);
          const double pi = pv.v(q, i);
          double dni = 0.0, ugrad = 0.0;
          for (int d = 0; d < dim; ++d) {
            dni += gi[d] * n[d];
            ugrad += gi[d] * uD[d];
          }
          for (int a = 0; a < dim; ++a) {
            double val;
            if (tag.u == UTag::dirichlet) {
              const double uT = mu * (uD[a] * dni + n[a] * ugrad) + lam * un * gi[a];
              val = -uT + nitsche_.gamma_a / hF * uD[a] * pi;
            } else {
              const double Tn = 2.0 * mu * n[a] * dni + lam * gi[a];
              val = -un * Tn + nitsche_.gamma_a / hF * un * pi * n[a];
            }
            Fv[nd[i] * dim + a] += w * val;
          }
        }
        for (int s = 0; s < nbq; ++s) Gv[qd[s]] -= w * alpha * vn * pq.v(q, s);
      }
      if (tag.p == PTag::dirichlet) {
        const double pD = eval(data.p_dirichlet, x, t);
        if (pD != 0.0)
          for (int s = 0; s < nbq; ++s)
            Gv[qd[s]] += w * (-pD * kdotn(K, pq.g(q, s), n, dim) + gp / hF * pD * pq.v(q, s));
      } else if (data.p_neumann) {
        const double pN = data.p_neumann(x, t);
        for (int s = 0; s < nbq; ++s) Gv[qd[s]] -= w * pN * pq.v(q, s);
      }
    }
  }
}

Vector Discretization::normal_flux(const VectorFn& wfn, double t) const {
  const MeshLevel& m = *mesh_;
  const int dim = m.dim;
  const auto& Q = dofs_.qspace();
  const int nbq = Q.dofs_per_cell();
  Vector out = Vector::Zero(dofs_.S());
  if (!wfn) return out;
  const auto fq = face_tables(Q.element(), dofs_.r() + 2);
  for (int f : m.boundary_faces) {
    const Face& face = m.faces[f];
    if (tags_[f].u == UTag::neumann) continue;
    const Vec3 n = face.normal();
    const CellGeom g = cell_geom(m, face.cell_plus);
    const double fj = face_jac(g, dim, face.axis);
    const auto& tab = fq.get(face.axis, face.normal_sign);
    const auto pts = detail::face_points(fq.rule, dim, face.axis, face.normal_sign);
    const int* qd = Q.cell_dofs(face.cell_plus);
    for (std::size_t q = 0; q < fq.rule.size(); ++q) {
      const Vec3 wv = wfn(to_physical(g, pts[q], dim), t);
      double wn = 0.0;
      for (int a = 0; a < dim; ++a) wn += wv[a] * n[a];
      for (int s = 0; s < nbq; ++s) out[qd[s]] += fq.rule.weights[q] * fj * wn * tab.value(q, s);
    }
  }
  return out;
}

namespace {

SparseMatrix scalar_mass(const MeshLevel& m, const ScalarSpace& sp, int npts) {
  const int dim = m.dim;
  const QuadratureRule rule = gauss_rule(npts, dim);
  std::vector<Point> qp(rule.points.begin(), rule.points.end());
  const ElementTable t = tabulate(sp.element(), qp);
  std::vector<Triplet> trip;
  const int nb = sp.dofs_per_cell();
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
    const CellGeom g = cell_geom(m, c);
    const int* d = sp.cell_dofs(c);
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j) {
        double s = 0.0;
        for (int q = 0; q < t.nq; ++q) s += rule.weights[q] * t.value(q, i) * t.value(q, j);
        trip.emplace_back(d[i], d[j], s * g.jac);
      }
  }
  SparseMatrix M(sp.size(), sp.size());
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

}  // namespace

const SparseMatrix& Discretization::scalar_mass_v() const {
  if (!cache_->ready) {
    cache_->mass_v = scalar_mass(*mesh_, dofs_.vspace(), dofs_.r() + 1);
    cache_->mass_q = scalar_mass(*mesh_, dofs_.qspace(), dofs_.r() + 1);
    cache_->solve_v.compute(Eigen::SparseMatrix<double>(cache_->mass_v));
    cache_->solve_q.compute(Eigen::SparseMatrix<double>(cache_->mass_q));
    if (cache_->solve_v.info() != Eigen::Success || cache_->solve_q.info() != Eigen::Success)
      throw Error("mass matrix factorization failed");
    cache_->ready = true;
  }
  return cache_->mass_v;
}

const SparseMatrix& Discretization::scalar_mass_q() const {
  scalar_mass_v();
  return cache_->mass_q;
}

Vector Discretization::project_vector(const VectorFn& fn, double t) const {
  const int dim = mesh_->dim;
  const auto& V = dofs_.vspace();
  Vector out = Vector::Zero(dofs_.R());
  if (!fn) return out;
  scalar_mass_v();
  const int r = dofs_.r();
  const QuadratureRule rule = gauss_rule(r + 2, dim);
  std::vector<Point> qp(rule.points.begin(), rule.points.end());
  const ElementTable tab = tabulate(V.element(), qp);
  DenseMatrix b = DenseMatrix::Zero(V.size(), dim);
  for (int c = 0; c < static_cast<int>(mesh_->cells.size()); ++c) {
    const CellGeom g = cell_geom(*mesh_, c);
    const int* nd = V.cell_dofs(c);
    for (int q = 0; q < tab.nq; ++q) {
      const Vec3 f = fn(to_physical(g, qp[q], dim), t);
      const double w = rule.weights[q] * g.jac;
      for (int i = 0; i < tab.nb; ++i)
        for (int a = 0; a < dim; ++a) b(nd[i], a) += w * f[a] * tab.value(q, i);
    }
  }
  for (int a = 0; a < dim; ++a) {
    const Vector x = cache_->solve_v.solve(b.col(a));
    for (int i = 0; i < V.size(); ++i) out[i * dim + a] = x[i];
  }
  return out;
}

Vector Discretization::project_scalar(const ScalarFn& fn, double t) const {
  const int dim = mesh_->dim;
  const auto& Q = dofs_.qspace();
  if (!fn) return Vector::Zero(dofs_.S());
  scalar_mass_v();
  const QuadratureRule rule = gauss_rule(dofs_.r() + 2, dim);
  std::vector<Point> qp(rule.points.begin(), rule.points.end());
  const ElementTable tab = tabulate(Q.element(), qp);
  Vector b = Vector::Zero(Q.size());
  for (int c = 0; c < static_cast<int>(mesh_->cells.size()); ++c) {
    const CellGeom g = cell_geom(*mesh_, c);
    const int* qd = Q.cell_dofs(c);
    for (int q = 0; q < tab.nq; ++q) {
      const double f = fn(to_physical(g, qp[q], dim), t);
      const double w = rule.weights[q] * g.jac;
      for (int i = 0; i < tab.nb; ++i) b[qd[i]] += w * f * tab.value(q, i);
    }
  }
  return cache_->solve_q.solve(b);
}

void write_coo(const SparseMatrix& A, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path);
  os.precision(17);
  os << "% " << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  for (int i = 0; i < A.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(A, i); it; ++it) os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
}

void write_vector(const Vector& v, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path);
  os.precision(17);
  for (Eigen::Index i = 0; i < v.size(); ++i) os << i << ' ' << v[i] << '\n';
}

}  // namespace stbiot
