#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace normsol {

// Bad user input / bad configuration. CLI maps this to exit code 2.
struct config_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Solver breakdown, non-convergence, unresolvable scales. CLI exit code 3.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Criticality { Subcritical, Critical, Supercritical };

/// Dimension N and nonlinearity exponent p, with 1 < p < 2*-1.
/// Grids support N = 1, 2; the radial ground-state solver also accepts N = 3.
struct ProblemParams {
  int dim;
  double p;

  ProblemParams(int dim_, double p_) : dim(dim_), p(p_) {
    if (dim < 1 || dim > 3) throw config_error("ProblemParams: dim must be 1, 2 or 3");
    if (!(p > 1.0) || !std::isfinite(p))
      throw config_error("ProblemParams: need 1 < p < infinity");
    if (dim == 3 && !(p < 5.0))
      throw config_error("ProblemParams: need p < 5 for dim 3 (Sobolev-subcritical)");
  }

  // The L2-critical exponent 1 + 4/N.
  double critical_exponent() const { return 1.0 + 4.0 / dim; }

  Criticality criticality() const {
    const double pc = critical_exponent();
    if (p < pc) return Criticality::Subcritical;
    if (p > pc) return Criticality::Supercritical;
    return Criticality::Critical;
  }
};

inline double critical_exponent(int dim) { return 1.0 + 4.0 / dim; }

enum class DomainKind { Interval, Rectangle, Disk };

/// Bounded domain: interval (a,b), axis-aligned rectangle (0,w0)x(0,w1),
/// or disk of given radius centered at the origin.
struct DomainSpec {
  DomainKind kind = DomainKind::Interval;
  double a = 0.0, b = 1.0;     // interval endpoints
  double w0 = 1.0, w1 = 1.0;   // rectangle widths
  double radius = 1.0;

  static DomainSpec interval(double a, double b) {
    if (!(b > a)) throw config_error("interval: need b > a");
    DomainSpec d;
    d.kind = DomainKind::Interval;
    d.a = a;
    d.b = b;
    return d;
  }
  static DomainSpec rectangle(double w0, double w1) {
    if (!(w0 > 0.0) || !(w1 > 0.0)) throw config_error("rectangle: widths must be positive");
    DomainSpec d;
    d.kind = DomainKind::Rectangle;
    d.w0 = w0;
    d.w1 = w1;
    return d;
  }
  static DomainSpec disk(double r) {
    if (!(r > 0.0)) throw config_error("disk: radius must be positive");
    DomainSpec d;
    d.kind = DomainKind::Disk;
    d.radius = r;
    return d;
  }

  int dim() const { return kind == DomainKind::Interval ? 1 : 2; }

  std::string str() const;
};

/// Exact analytic measure |Omega|.
double measure(const DomainSpec& d);

}  // namespace normsol
