#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qaff/qgops.hpp"

namespace qaff {

namespace {

SymOp leg1_dilation(const char* name, bool reciprocal) {
  PointMapSpec s;
  s.guard = [](const Legs& x, double eps) { return std::abs(1.0 + x[1].xi[0]) >= eps; };
  s.sigma = [reciprocal](const Legs& x) {
    double c = 1.0 + x[1].xi[0];
    if (reciprocal) c = 1.0 / c;
    return Legs{XPoint{{c * x[0].q[0]}, {c * x[0].xi[0]}}, x[1]};
  };
  s.weight = [](const Legs&) { return cplx(1.0); };
  s.guard_inv = s.guard;
  s.sigma_inv = [reciprocal](const Legs& y) {
    double c = 1.0 + y[1].xi[0];
    if (!reciprocal) c = 1.0 / c;
    return Legs{XPoint{{c * y[0].q[0]}, {c * y[0].xi[0]}}, y[1]};
  };
  return make_point_op(name, 2, false, std::move(s));
}

// Fourier spectral differentiation on n periodic nodes of [-half, half).
Eigen::MatrixXd spectral_d(int n, double half) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  const double h = 2.0 * std::numbers::pi / n;
  const double scale = std::numbers::pi / half;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (j != k) d(j, k) = scale * 0.5 * (((j - k) % 2 == 0) ? 1.0 : -1.0) / std::tan((j - k) * h / 2.0);
  return d;
}

// Probe function on leg 1: odd in q, with distinct profiles on the two ξ signs.
double probe_q(double q) {
  double u = std::log(std::abs(q));
  return (q > 0 ? 1.0 : -1.0) * std::exp(-(u - 0.3) * (u - 0.3));
}
double probe_xi(double xi) {
  double t = std::log(std::abs(xi));
  return xi > 0 ? std::exp(-(t - 0.5) * (t - 0.5)) : 0.5 * std::exp(-(t + 1.0) * (t + 1.0) / 2.0);
}

}  // namespace

SymOp stachura_op() { return leg1_dilation("OmegaS", false); }

SymOp stachura_reversed_op() { return leg1_dilation("OmegaS[reversed]", true); }

SymOp footnote_U() {
  PointMapSpec s;
  s.sigma = [](const Legs& x) { return Legs{XPoint{{1.0 / x[0].q[0]}, x[0].xi}}; };
  s.weight = [](const Legs& x) { return cplx(std::abs(x[0].q[0])); };
  s.sigma_inv = s.sigma;
  return make_point_op("U", 1, false, std::move(s));
}

SymOp stachura_transported(const ModelPtr& axb) {
  SymOp uu = tensor(footnote_U(), footnote_U());
  return compose({uu, omega_bar(axb), uu}).renamed("(U⊗U)OmegaBar(U⊗U)");
}

VerificationReport check_stachura(const SamplePlan& plan, std::uint64_t stream) {
  ModelPtr axb = make_model("axb");
  VerificationReport r = random_equality_test(stachura_transported(axb), stachura_op(), "stachura", axb, plan, stream);
  r.notes.push_back(
      "flow convention: leg-1 (q,xi) -> (1+xi2)(q,xi), i.e. parity^[1+xi2<0] exp(log|1+xi2| (q d/dq + xi d/dxi))");
  return r;
}

FlowOracleResult stachura_flow_oracle(int n) {
  const double half = 8.0;
  const Eigen::MatrixXd d = spectral_d(n, half);
  std::vector<double> nodes(n);
  for (int k = 0; k < n; ++k) nodes[k] = -half + 2.0 * half * k / n;

  SymOp op = stachura_op();
  FlowOracleResult res{n, 0.0};
  for (double xi2 : {0.5, 2.0, -0.5, -1.8, -3.0}) {
    const double c = 1.0 + xi2;
    const double a = std::log(std::abs(c));
    const Eigen::MatrixXd e = (a * d).exp();
    // Flow each sign component separately in the log coordinates.
    Eigen::VectorXd gq[2], gx[2];
    for (int s = 0; s < 2; ++s) {
      double sg = s == 0 ? 1.0 : -1.0;
      Eigen::VectorXd fq(n), fx(n);
      for (int k = 0; k < n; ++k) {
        fq(k) = probe_q(sg * std::exp(nodes[k]));
        fx(k) = probe_xi(sg * std::exp(nodes[k]));
      }
      gq[s] = e * fq;
      gx[s] = e * fx;
    }
    double num = 0.0, den = 0.0;
    for (int sq = 0; sq < 2; ++sq)
      for (int sx = 0; sx < 2; ++sx)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double q = (sq == 0 ? 1.0 : -1.0) * std::exp(nodes[j]);
            double xi = (sx == 0 ? 1.0 : -1.0) * std::exp(nodes[k]);
            // Parity: (I F)(q, ξ) = F(−q, −ξ) swaps both sign components.
            int tq = c < 0 ? 1 - sq : sq, tx = c < 0 ? 1 - sx : sx;
            double oracle = gq[tq](j) * gx[tx](k);
            auto ev = op.eval(Legs{XPoint{{q}, {xi}}, XPoint{{1.0}, {xi2}}}, 1e-3);
            double closed = ev ? ev->weight.real() * probe_q(ev->image[0].q[0]) * probe_xi(ev->image[0].xi[0]) : NAN;
            num += (oracle - closed) * (oracle - closed);
            den += closed * closed;
          }
    double rel = std::sqrt(num / den);
    if (!(rel <= res.rel_err)) res.rel_err = rel;
  }
  return res;
}

}  // namespace qaff
