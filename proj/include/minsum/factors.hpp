#ifndef MINSUM_FACTORS_HPP
#define MINSUM_FACTORS_HPP

#include <functional>
#include <string>

#include "minsum/common.hpp"

namespace minsum {

struct CurvatureRange {
  double lo = 0;  // infimum over the real line (or a stated box for custom)
  double hi = 0;  // supremum, may be +inf
};

enum class NodeFamily { quadratic, quartic, logcosh, custom };

/// Univariate node factor f_i. Builtin families are closed under the file
/// format and ship exact curvature ranges; custom factors are library-only
/// and used at the caller's risk (coercivity is not verifiable in general).
struct ScalarFactor {
  NodeFamily family = NodeFamily::quadratic;
  double a = 1, b = 0, c = 0, s = 0;

  std::function<double(double)> custom_f, custom_df, custom_d2f;
  CurvatureRange custom_curvature{0, kInf};

  double value(double x) const;
  double deriv(double x) const;
  double second(double x) const;

  /// Curvature range over all of R for builtin families; the caller-supplied
  /// range for custom factors.
  CurvatureRange curvature_range() const;

  /// A point minimising the curvature within [lo, hi] (used to build
  /// adversarial sample points for the dominance check).
  double curvature_argmin(double lo, double hi) const;

  static ScalarFactor quadratic(double a, double b);
  static ScalarFactor quartic(double c, double b);
  static ScalarFactor logcosh(double s, double c, double b);
  static ScalarFactor custom(std::function<double(double)> f,
                             std::function<double(double)> df,
                             std::function<double(double)> d2f,
                             CurvatureRange curvature = {0, kInf});
};

enum class EdgeFamily { bilinear, custom };

/// Bivariate edge factor f_ij, stored once per undirected edge with the
/// canonical argument order (x_lo, x_hi). Not required to be convex.
struct EdgeFactor {
  EdgeFamily family = EdgeFamily::bilinear;
  double a = 0;

  std::function<double(double, double)> custom_f, custom_d1, custom_d2,
      custom_d11, custom_d22, custom_d12;
  double custom_mixed_abs_sup = kInf;   // sup |d12| (box-restricted for custom)
  double custom_own_curvature_min = 0;  // inf of d11 and d22

  double value(double x, double y) const;
  double d1(double x, double y) const;
  double d2(double x, double y) const;
  double d11(double x, double y) const;
  double d22(double x, double y) const;
  double d12(double x, double y) const;

  double mixed_abs_sup() const;     // sup_{x,y} |d12|
  double own_curvature_min() const; // inf of the two pure second partials

  static EdgeFactor bilinear(double a);
  static EdgeFactor custom(std::function<double(double, double)> f,
                           std::function<double(double, double)> d1,
                           std::function<double(double, double)> d2,
                           std::function<double(double, double)> d11,
                           std::function<double(double, double)> d22,
                           std::function<double(double, double)> d12,
                           double mixed_abs_sup = kInf,
                           double own_curvature_min = 0);
};

/// View of an edge factor as f_{received by r} (first argument = receiver's
/// variable), regardless of the canonical storage orientation.
struct OrientedEdge {
  const EdgeFactor* factor;
  bool receiver_is_lo;

  double value(double x_recv, double x_send) const {
    return receiver_is_lo ? factor->value(x_recv, x_send)
                          : factor->value(x_send, x_recv);
  }
  double d_recv(double x_recv, double x_send) const {
    return receiver_is_lo ? factor->d1(x_recv, x_send)
                          : factor->d2(x_send, x_recv);
  }
  double d_send(double x_recv, double x_send) const {
    return receiver_is_lo ? factor->d2(x_recv, x_send)
                          : factor->d1(x_send, x_recv);
  }
  double d2_recv(double x_recv, double x_send) const {
    return receiver_is_lo ? factor->d11(x_recv, x_send)
                          : factor->d22(x_send, x_recv);
  }
  double d2_send(double x_recv, double x_send) const {
    return receiver_is_lo ? factor->d22(x_recv, x_send)
                          : factor->d11(x_send, x_recv);
  }
  double d12(double x_recv, double x_send) const {
    return receiver_is_lo ? factor->d12(x_recv, x_send)
                          : factor->d12(x_send, x_recv);
  }
};

std::string family_name(NodeFamily f);
std::string family_name(EdgeFamily f);

}  // namespace minsum

#endif
