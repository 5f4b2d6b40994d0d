#include "minsum/init_messages.hpp"

namespace minsum {

InitialMessages InitialMessages::zero(int n) {
  InitialMessages m;
  m.kind = Kind::from_x0;
  m.x0.assign(n, 0.0);
  return m;
}

InitialMessages InitialMessages::from_x0(std::vector<double> x0) {
  InitialMessages m;
  m.kind = Kind::from_x0;
  m.x0 = std::move(x0);
  return m;
}

InitialMessages InitialMessages::quadratic_affine(
    std::vector<double> alpha0, std::vector<double> beta0,
    std::optional<RhoWitness> witness) {
  InitialMessages m;
  m.kind = Kind::quadratic_affine;
  m.alpha0 = std::move(alpha0);
  m.beta0 = std::move(beta0);
  m.witness = std::move(witness);
  return m;
}

InitialMessages InitialMessages::general_custom(
    std::vector<double> x0, std::vector<std::function<double(double)>> j0,
    std::vector<std::function<double(double)>> dj0) {
  InitialMessages m;
  m.kind = Kind::general_custom;
  m.x0 = std::move(x0);
  m.j0 = std::move(j0);
  m.dj0 = std::move(dj0);
  return m;
}

double InitialMessages::value(const PairwiseObjective& obj, int from, int to,
                              double x) const {
  const int d = obj.graph.directed(from, to);
  switch (kind) {
    case Kind::from_x0: {
      const int e = d / 2;
      return obj.oriented(e, to).value(x, x0_at(from));
    }
    case Kind::quadratic_affine:
      return 0.5 * alpha0[d] * x * x - beta0[d] * x;
    case Kind::general_custom:
      return j0[d](x);
  }
  return 0;
}

double InitialMessages::deriv(const PairwiseObjective& obj, int from, int to,
                              double x) const {
  const int d = obj.graph.directed(from, to);
  switch (kind) {
    case Kind::from_x0: {
      const int e = d / 2;
      return obj.oriented(e, to).d_recv(x, x0_at(from));
    }
    case Kind::quadratic_affine:
      return alpha0[d] * x - beta0[d];
    case Kind::general_custom:
      return dj0[d](x);
  }
  return 0;
}

double InitialMessages::alpha_q(const QuadraticProblem& q, int from, int to) const {
  if (kind == Kind::quadratic_affine) return alpha0[q.graph.directed(from, to)];
  if (kind == Kind::from_x0) return 0.0;
  throw Error("general_custom initial messages are not usable on the quadratic path");
}

double InitialMessages::beta_q(const QuadraticProblem& q, int from, int to) const {
  const int d = q.graph.directed(from, to);
  if (kind == Kind::quadratic_affine) return beta0[d];
  if (kind == Kind::from_x0) return -q.offdiag[d / 2] * x0_at(from);
  throw Error("general_custom initial messages are not usable on the quadratic path");
}

}  // namespace minsum
