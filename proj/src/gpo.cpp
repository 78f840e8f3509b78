#include "ergoloc/gpo.hpp"

#include <cmath>

namespace ergoloc {

namespace {

double real_checked(cplx z, double scale) {
  if (std::abs(z.imag()) > 1e-10 * std::max(1.0, scale)) {
    throw InvalidInput("expansion coefficient has a non-negligible imaginary part");
  }
  return z.real();
}

// Tr[(a x b) m] for a on S, b on E, without building the Kronecker product.
cplx trace_against_product(const ComplexMatrix& m, const ComplexMatrix& a, const ComplexMatrix& b,
                           Dims dims) {
  const int de = dims.e;
  cplx acc = 0.0;
  for (int i = 0; i < dims.s; ++i) {
    for (int j = 0; j < dims.s; ++j) {
      if (a(i, j) == cplx(0.0)) continue;
      // (a x b)_{(i,x),(j,y)} = a_ij b_xy ; Tr[(a x b) m] = sum a_ij b_xy m_{(j,y),(i,x)}
      acc += a(i, j) * (b.cwiseProduct(m.block(j * de, i * de, de, de).transpose())).sum();
    }
  }
  return acc;
}

}  // namespace

GpoBasis gpo_basis(int d) {
  if (d < 2) throw DimensionError("gpo_basis: d must be at least 2");
  GpoBasis b{d, {}};
  b.sigmas.reserve(d * d - 1);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix s = ComplexMatrix::Zero(d, d);
      s(j, k) = s(k, j) = 1.0;
      b.sigmas.push_back(std::move(s));
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix s = ComplexMatrix::Zero(d, d);
      s(k, j) = kI;
      s(j, k) = -kI;
      b.sigmas.push_back(std::move(s));
    }
  }
  for (int k = 0; k + 1 < d; ++k) {
    const int l = d - 1 - k;
    const double norm = std::sqrt(2.0 / (l * (l + 1.0)));
    ComplexMatrix s = ComplexMatrix::Zero(d, d);
    s(k, k) = -double(l) * norm;
    for (int m = k + 1; m < d; ++m) s(m, m) = norm;
    b.sigmas.push_back(std::move(s));
  }
  return b;
}

RealVector bloch_vector(const ComplexMatrix& rho, const GpoBasis& basis) {
  require(rho.rows() == basis.d && rho.cols() == basis.d, "bloch_vector: dimension mismatch");
  const double scale = rho.size() ? rho.cwiseAbs().maxCoeff() : 0.0;
  RealVector r(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    r(i) = real_checked((basis[i] * rho).trace(), scale);
  }
  return r;
}

ComplexMatrix state_from_bloch(const RealVector& r, const GpoBasis& basis) {
  require(r.size() == basis.size(), "state_from_bloch: coefficient count mismatch");
  ComplexMatrix rho = ComplexMatrix::Identity(basis.d, basis.d) / double(basis.d);
  for (int i = 0; i < basis.size(); ++i) rho += 0.5 * r(i) * basis[i];
  return rho;
}

BlochDecomposition decompose(const BipartiteSystem& system) {
  const Dims dims = system.dims();
  const GpoBasis bs = gpo_basis(dims.s);
  const int ns = bs.size();
  BlochDecomposition out;
  out.r = bloch_vector(system.rho_s(), bs);
  out.h.resize(ns);
  for (int i = 0; i < ns; ++i) {
    out.h(i) = real_checked((bs[i] * system.h_s()).trace(), system.h_s().cwiseAbs().maxCoeff()) / 2.0;
  }
  out.c = system.h_s().trace().real() / dims.s;

  const ComplexMatrix& rho = system.rho();
  const ComplexMatrix& v = system.v();
  const double vscale = v.cwiseAbs().maxCoeff();
  const ComplexMatrix id_e = ComplexMatrix::Identity(dims.e, dims.e);
  out.w.resize(ns);
  for (int i = 0; i < ns; ++i) {
    out.w(i) = real_checked(trace_against_product(v, bs[i], id_e, dims), vscale) / (2.0 * dims.e);
  }

  if (dims.e >= 2) {
    const GpoBasis be = gpo_basis(dims.e);
    const int ne = be.size();
    out.q = bloch_vector(system.rho_e(), be);
    out.t.resize(ns, ne);
    out.v.resize(ns, ne);
    for (int i = 0; i < ns; ++i) {
      for (int j = 0; j < ne; ++j) {
        out.t(i, j) = real_checked(trace_against_product(rho, bs[i], be[j], dims), 1.0);
        out.v(i, j) = real_checked(trace_against_product(v, bs[i], be[j], dims), vscale) / 4.0;
      }
    }
  } else {
    out.q.resize(0);
    out.t.resize(ns, 0);
    out.v.resize(ns, 0);
  }
  return out;
}

ComplexMatrix reconstruct_state(const BlochDecomposition& b, Dims dims) {
  const GpoBasis bs = gpo_basis(dims.s);
  const int n = dims.total();
  ComplexMatrix rho = ComplexMatrix::Identity(n, n) / double(n);
  const ComplexMatrix id_s = ComplexMatrix::Identity(dims.s, dims.s);
  const ComplexMatrix id_e = ComplexMatrix::Identity(dims.e, dims.e);
  for (int i = 0; i < bs.size(); ++i) rho += b.r(i) / (2.0 * dims.e) * tensor_product(bs[i], id_e);
  if (dims.e >= 2) {
    const GpoBasis be = gpo_basis(dims.e);
    for (int j = 0; j < be.size(); ++j) rho += b.q(j) / (2.0 * dims.s) * tensor_product(id_s, be[j]);
    for (int i = 0; i < bs.size(); ++i) {
      for (int j = 0; j < be.size(); ++j) rho += b.t(i, j) / 4.0 * tensor_product(bs[i], be[j]);
    }
  }
  return rho;
}

ComplexMatrix reconstruct_h_s(const BlochDecomposition& b, int ds) {
  const GpoBasis bs = gpo_basis(ds);
  ComplexMatrix h = b.c * ComplexMatrix::Identity(ds, ds);
  for (int i = 0; i < bs.size(); ++i) h += b.h(i) * bs[i];
  return h;
}

ComplexMatrix reconstruct_coupling(const BlochDecomposition& b, Dims dims) {
  const GpoBasis bs = gpo_basis(dims.s);
  const int n = dims.total();
  ComplexMatrix v = ComplexMatrix::Zero(n, n);
  const ComplexMatrix id_e = ComplexMatrix::Identity(dims.e, dims.e);
  for (int i = 0; i < bs.size(); ++i) v += b.w(i) * tensor_product(bs[i], id_e);
  if (dims.e >= 2) {
    const GpoBasis be = gpo_basis(dims.e);
    for (int i = 0; i < bs.size(); ++i) {
      for (int j = 0; j < be.size(); ++j) v += b.v(i, j) * tensor_product(bs[i], be[j]);
    }
  }
  return v;
}

RealMatrix orthogonal_image(const ComplexMatrix& u, const GpoBasis& basis) {
  require(u.rows() == basis.d && u.cols() == basis.d, "orthogonal_image: dimension mismatch");
  const ComplexMatrix id = ComplexMatrix::Identity(basis.d, basis.d);
  if ((u.adjoint() * u - id).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidInput("orthogonal_image: matrix is not unitary");
  }
  const int n = basis.size();
  std::vector<ComplexMatrix> rotated(n);
  for (int j = 0; j < n; ++j) rotated[j] = u * basis[j] * u.adjoint();
  RealMatrix o(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) o(i, j) = trace_product(basis[i], rotated[j]) / 2.0;
  }
  return o;
}

}  // namespace ergoloc
