#include "ergoloc/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ergoloc {

namespace {

std::string shape(const ComplexMatrix& a) {
  std::ostringstream os;
  os << a.rows() << "x" << a.cols();
  return os.str();
}

void require_square(const ComplexMatrix& a, int n, const char* what) {
  if (a.rows() != n || a.cols() != n) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(n) + "x" +
                         std::to_string(n) + ", got " + shape(a));
  }
}

}  // namespace

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index br = b.rows(), bc = b.cols();
  ComplexMatrix out(a.rows() * br, a.cols() * bc);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& a, Dims dims, Side traced) {
  require_square(a, dims.total(), "partial_trace");
  const int ds = dims.s, de = dims.e;
  if (traced == Side::S) {
    ComplexMatrix out = ComplexMatrix::Zero(de, de);
    for (int i = 0; i < ds; ++i) out += a.block(i * de, i * de, de, de);
    return out;
  }
  ComplexMatrix out(ds, ds);
  for (int i = 0; i < ds; ++i) {
    for (int j = 0; j < ds; ++j) out(i, j) = a.block(i * de, j * de, de, de).trace();
  }
  return out;
}

ComplexMatrix partial_transpose_s(const ComplexMatrix& a, Dims dims) {
  require_square(a, dims.total(), "partial_transpose_s");
  const int ds = dims.s, de = dims.e;
  ComplexMatrix out(a.rows(), a.cols());
  for (int i = 0; i < ds; ++i) {
    for (int j = 0; j < ds; ++j) {
      out.block(i * de, j * de, de, de) = a.block(j * de, i * de, de, de);
    }
  }
  return out;
}

double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.size() ? a.cwiseAbs().maxCoeff() : 0.0);
  return hermiticity_defect(a) <= tol * scale;
}

ComplexMatrix hermitize(const ComplexMatrix& a, double tol) {
  if (a.rows() != a.cols()) throw DimensionError("hermitize: non-square " + shape(a));
  if (!is_hermitian(a, tol)) {
    std::ostringstream os;
    os << "matrix is not Hermitian (defect " << hermiticity_defect(a) << ")";
    throw InvalidInput(os.str());
  }
  return (a + a.adjoint()) / 2.0;
}

EigenSystem hermitian_eig(const ComplexMatrix& a) {
  ComplexMatrix h = hermitize(a);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) throw NotConverged("hermitian_eig: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double hs_norm(const ComplexMatrix& a) { return a.norm(); }

double trace_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<ComplexMatrix>(a).singularValues().sum();
}

double operator_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<ComplexMatrix>(a).singularValues()(0);
}

Norms norms(const ComplexMatrix& a) {
  if (a.size() == 0) return {};
  const RealVector sv = Eigen::JacobiSVD<ComplexMatrix>(a).singularValues();
  return {a.norm(), sv.sum(), sv(0)};
}

ComplexMatrix expi_hermitian(const ComplexMatrix& a) {
  const EigenSystem es = hermitian_eig(a);
  ComplexVector phases(es.values.size());
  for (Eigen::Index k = 0; k < es.values.size(); ++k) phases(k) = std::exp(kI * es.values(k));
  return es.vectors * phases.asDiagonal() * es.vectors.adjoint();
}

ComplexMatrix projector(const ComplexVector& psi) { return psi * psi.adjoint(); }

double trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  // Tr[ab] = sum_ij a_ij b_ji
  return (a.cwiseProduct(b.transpose())).sum().real();
}

ComplexMatrix lift_s(const ComplexMatrix& a, int de) {
  return tensor_product(a, ComplexMatrix::Identity(de, de));
}

ComplexMatrix lift_e(int ds, const ComplexMatrix& b) {
  return tensor_product(ComplexMatrix::Identity(ds, ds), b);
}

ComplexMatrix apply_local_unitary(const ComplexMatrix& rho, const ComplexMatrix& u, Dims dims) {
  require_square(rho, dims.total(), "apply_local_unitary(rho)");
  require_square(u, dims.s, "apply_local_unitary(U)");
  const int ds = dims.s, de = dims.e;
  // Left multiply by U (x) I: block row i becomes sum_k U_ik * block row k.
  ComplexMatrix tmp = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (int i = 0; i < ds; ++i) {
    for (int k = 0; k < ds; ++k) {
      if (u(i, k) == cplx(0.0)) continue;
      tmp.middleRows(i * de, de) += u(i, k) * rho.middleRows(k * de, de);
    }
  }
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  const ComplexMatrix ud = u.adjoint();
  for (int j = 0; j < ds; ++j) {
    for (int k = 0; k < ds; ++k) {
      if (ud(k, j) == cplx(0.0)) continue;
      out.middleCols(j * de, de) += tmp.middleCols(k * de, de) * ud(k, j);
    }
  }
  return out;
}

BipartiteSystem::BipartiteSystem(Dims dims, ComplexMatrix rho, ComplexMatrix h_s, ComplexMatrix h_e,
                                 ComplexMatrix v)
    : dims_(dims) {
  if (dims.s < 1 || dims.e < 1) throw DimensionError("BipartiteSystem: dimensions must be positive");
  const int n = dims.total();
  require_square(rho, n, "BipartiteSystem rho");
  require_square(h_s, dims.s, "BipartiteSystem H_S");
  require_square(h_e, dims.e, "BipartiteSystem H_E");
  require_square(v, n, "BipartiteSystem V");
  rho_ = hermitize(rho);
  h_s_ = hermitize(h_s);
  h_e_ = hermitize(h_e);
  v_ = hermitize(v);

  const double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > 1e-10) {
    std::ostringstream os;
    os << "state trace is " << tr << ", expected 1";
    throw InvalidInput(os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -1e-10) {
    std::ostringstream os;
    os << "state is not positive semidefinite (min eigenvalue " << es.eigenvalues()(0) << ")";
    throw InvalidInput(os.str());
  }
  const ComplexMatrix trs_v = partial_trace(v_, dims_, Side::S);
  const double scale = std::max(1.0, v_.size() ? v_.cwiseAbs().maxCoeff() : 0.0);
  if (trs_v.size() && trs_v.cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidInput("coupling has nonzero partial trace over S; use normalize_coupling");
  }
}

BipartiteSystem BipartiteSystem::from_total_hamiltonian(Dims dims, ComplexMatrix rho,
                                                        const ComplexMatrix& h_total) {
  require_square(h_total, dims.total(), "from_total_hamiltonian");
  const ComplexMatrix h = hermitize(h_total);
  ComplexMatrix h_e = partial_trace(h, dims, Side::S) / double(dims.s);
  const ComplexMatrix rest = h - lift_e(dims.s, h_e);
  const ComplexMatrix h_s = partial_trace(rest, dims, Side::E) / double(dims.e);
  ComplexMatrix v = rest - lift_s(h_s, dims.e);
  return BipartiteSystem(dims, std::move(rho), h_s, std::move(h_e), std::move(v));
}

std::pair<ComplexMatrix, ComplexMatrix> BipartiteSystem::normalize_coupling(Dims dims,
                                                                            const ComplexMatrix& h_e,
                                                                            const ComplexMatrix& v) {
  require_square(h_e, dims.e, "normalize_coupling H_E");
  const ComplexMatrix shift = partial_trace(v, dims, Side::S) / double(dims.s);
  return {h_e + shift, v - lift_e(dims.s, shift)};
}

ComplexMatrix BipartiteSystem::total_hamiltonian() const {
  return lift_s(h_s_, dims_.e) + lift_e(dims_.s, h_e_) + v_;
}

ComplexMatrix BipartiteSystem::local_hamiltonian() const { return lift_s(h_s_, dims_.e) + v_; }

BipartiteSystem BipartiteSystem::with_state(ComplexMatrix rho) const {
  return BipartiteSystem(dims_, std::move(rho), h_s_, h_e_, v_);
}

}  // namespace ergoloc
