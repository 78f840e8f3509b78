#include "ergoloc/sdp.hpp"

#include <cmath>

#include "ergoloc/matrix_io.hpp"

namespace ergoloc {

namespace {

// Projection onto span{I (x) a + b (x) I}.
ComplexMatrix marginal_part(const ComplexMatrix& t, int d) {
  const Dims dd{d, d};
  const ComplexMatrix a = partial_trace(t, dd, Side::S);
  const ComplexMatrix b = partial_trace(t, dd, Side::E);
  const cplx tr = t.trace();
  return lift_e(d, a) / double(d) + lift_s(b, d) / double(d) -
         tr / double(d * d) * ComplexMatrix::Identity(d * d, d * d);
}

ComplexMatrix project_affine(const ComplexMatrix& x, int d) {
  const Dims dd{d, d};
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const ComplexMatrix a = partial_trace(x, dd, Side::S) - id;
  const ComplexMatrix b = partial_trace(x, dd, Side::E) - id;
  return x - lift_e(d, a) / double(d) - lift_s(b, d) / double(d) +
         a.trace() / double(d * d) * ComplexMatrix::Identity(d * d, d * d);
}

ComplexMatrix project_psd(const ComplexMatrix& x) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((x + x.adjoint()) / 2.0);
  const RealVector lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

double min_eigenvalue(const ComplexMatrix& x) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((x + x.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

ChoiCost choi_cost(const ComplexMatrix& rho, const ComplexMatrix& h, Dims dims) {
  require(rho.rows() == dims.total() && rho.cols() == dims.total(), "choi_cost: state dimension");
  require(h.rows() == dims.total() && h.cols() == dims.total(), "choi_cost: Hamiltonian dimension");
  const int ds = dims.s, de = dims.e;
  ComplexMatrix c(ds * ds, ds * ds);
  // C_{(i,a),(j,b)} = Tr[rho_{ji} H_{ab}] with X_{ab} the (a,b) block of X.
  for (int i = 0; i < ds; ++i) {
    for (int j = 0; j < ds; ++j) {
      const auto rji = rho.block(j * de, i * de, de, de);
      for (int a = 0; a < ds; ++a) {
        for (int b = 0; b < ds; ++b) {
          const auto hab = h.block(a * de, b * de, de, de);
          c(i * ds + a, j * ds + b) = rji.cwiseProduct(hab.transpose()).sum();
        }
      }
    }
  }
  return {hermitize(c, 1e-9), ds};
}

ChoiCost choi_cost(const BipartiteSystem& system) {
  return choi_cost(system.rho(), system.total_hamiltonian(), system.dims());
}

ComplexMatrix choi_matrix(const std::vector<ComplexMatrix>& kraus) {
  require(!kraus.empty(), "choi_matrix: empty Kraus set");
  const int d = static_cast<int>(kraus.front().rows());
  ComplexMatrix e = ComplexMatrix::Zero(d * d, d * d);
  for (const auto& k : kraus) {
    require(k.rows() == d && k.cols() == d, "choi_matrix: Kraus operators must be square and equal size");
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) e.block(i * d, j * d, d, d) += k.col(i) * k.col(j).adjoint();
    }
  }
  return e;
}

ComplexMatrix apply_channel_s(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& rho, Dims dims) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  const ComplexMatrix id_e = ComplexMatrix::Identity(dims.e, dims.e);
  for (const auto& k : kraus) {
    const ComplexMatrix kk = tensor_product(k, id_e);
    out += kk * rho * kk.adjoint();
  }
  return out;
}

double bimarginal_defect(const ComplexMatrix& e, int d) {
  const Dims dd{d, d};
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  return std::max((partial_trace(e, dd, Side::S) - id).cwiseAbs().maxCoeff(),
                  (partial_trace(e, dd, Side::E) - id).cwiseAbs().maxCoeff());
}

SdpBound sdp_upper_bound(const ChoiCost& cost, double rho_energy, const SdpOptions& opts) {
  if (!(opts.tol > 0)) throw InvalidInput("sdp_upper_bound: tolerance must be positive");
  const int d = cost.d_s;
  const int n = d * d;
  require(cost.c.rows() == n && cost.c.cols() == n, "sdp_upper_bound: cost dimension");
  const ComplexMatrix& c = cost.c;

  // The marginal part of C contributes the constant Tr[C]/d on the feasible
  // set; only the remainder needs optimizing.
  const ComplexMatrix c_free = c - marginal_part(c, d);
  const double offset = c.trace().real() / d;
  const double scale = c_free.norm();

  SdpBound out;
  SdpSolution& sol = out.solution;
  if (scale <= 1e-14 * std::max(1.0, c.norm())) {
    sol.e = ComplexMatrix::Identity(n, n) / double(d);
    sol.objective = sol.dual_objective = trace_product(c, sol.e);
    sol.converged = true;
    out.bound = rho_energy - sol.objective;
    return out;
  }
  const ComplexMatrix cs = c_free / scale;

  double rho = opts.penalty;
  ComplexMatrix z = ComplexMatrix::Identity(n, n) / double(d);
  ComplexMatrix u = ComplexMatrix::Zero(n, n);
  ComplexMatrix x;
  double rp = 0.0, rd = 0.0, gap = 0.0, primal = 0.0, dual = 0.0;
  long it = 0;
  bool converged = false;
  const auto certify = [&]() {
    // Dual certificate from T = C + rho U, which lies near the marginal span.
    const ComplexMatrix t = cs + rho * u;
    const ComplexMatrix pt = marginal_part(t, d);
    dual = t.trace().real() / d + d * min_eigenvalue(cs - pt);
    primal = trace_product(cs, z);
    gap = (primal - dual) * scale;
  };
  for (it = 1; it <= opts.max_iterations; ++it) {
    x = project_affine(z - u - cs / rho, d);
    const ComplexMatrix xh = opts.relaxation * x + (1.0 - opts.relaxation) * z;
    const ComplexMatrix z_old = z;
    z = project_psd(xh + u);
    u += xh - z;
    rp = (x - z).norm();
    rd = rho * (z - z_old).norm();
    if (std::max(rp, rd) <= opts.tol) {
      certify();
      if (gap <= 10.0 * opts.tol) {
        converged = true;
        break;
      }
    }
    if (opts.adaptive_penalty && it % 50 == 0) {
      if (rp > 10.0 * rd) {
        rho *= 2.0;
        u /= 2.0;
      } else if (rd > 10.0 * rp) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }
  if (!converged) certify();
  sol.e = z;
  sol.iterations = std::min(it, opts.max_iterations);
  sol.converged = converged;
  sol.primal_residual = rp;
  sol.dual_residual = rd;
  sol.objective = primal * scale + offset;
  sol.dual_objective = dual * scale + offset;
  sol.gap = gap;
  out.bound = rho_energy - sol.objective;
  return out;
}

nlohmann::json export_sdp(const ChoiCost& cost, double rho_energy) {
  return nlohmann::json{{"d_s", cost.d_s},
                        {"cost", matrix_to_json(cost.c)},
                        {"constraints", "unital-bimarginal"},
                        {"rho_energy", rho_energy}};
}

std::pair<ChoiCost, double> import_sdp(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("d_s") || !j.contains("cost") || !j.contains("constraints")) {
    throw InvalidInput("SDP instance needs \"d_s\", \"cost\" and \"constraints\"");
  }
  if (j["constraints"] != "unital-bimarginal") throw InvalidInput("unsupported SDP constraint set");
  if (!j["d_s"].is_number_integer() || j["d_s"].get<int>() < 1) throw InvalidInput("bad d_s");
  ChoiCost cost;
  cost.d_s = j["d_s"].get<int>();
  cost.c = matrix_from_json(j["cost"]);
  const int n = cost.d_s * cost.d_s;
  if (cost.c.size() == 0) {
    cost.c = ComplexMatrix::Zero(n, n);
  }
  if (cost.c.rows() != n || cost.c.cols() != n) throw InvalidInput("SDP cost must be d_s^2 square");
  cost.c = hermitize(cost.c, 1e-9);
  double energy = 0.0;
  if (j.contains("rho_energy")) {
    if (!j["rho_energy"].is_number()) throw InvalidInput("rho_energy must be a number");
    energy = j["rho_energy"].get<double>();
  }
  return {cost, energy};
}

}  // namespace ergoloc
